from typing import Optional


class MvdError(Exception):
    exit_code = 1


class ShapeSpecError(MvdError): ...


class ConfigError(MvdError): ...


class ContractError(MvdError): ...


class EmptyGridError(MvdError): ...


class ResolutionLimitError(MvdError):
    def __init__(self, resolution: int, limit: int) -> None:
        super().__init__(f"resolution {resolution} exceeds the limit of {limit}")
        self.resolution = resolution
        self.limit = limit


class ResolutionMismatchError(MvdError):
    exit_code = 2

    def __init__(self, expected: int, actual: int, what: str = "grid") -> None:
        super().__init__(f"{what} resolution {actual} does not match {expected}")
        self.expected = expected
        self.actual = actual


class FormatError(MvdError):
    exit_code = 2

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class TrainingError(MvdError):
    def __init__(self, message: str, step: Optional[int] = None) -> None:
        if step is not None:
            message = f"{message} at step {step}"
        super().__init__(message)
        self.step = step
