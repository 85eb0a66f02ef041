def main() -> None:
    from mvd_sr.__main__ import entry

    entry()
