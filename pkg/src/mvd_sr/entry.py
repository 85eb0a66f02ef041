from argparse import Namespace

from mvd_sr.commands import CommandRunner
from mvd_sr.config import load_config_file
from mvd_sr.guards import exit_codes


@exit_codes
async def run(args: Namespace) -> int:
    runner = CommandRunner(args, load_config_file(args.config))
    return await runner.run(args.command)
