import argparse
import json
import logging
import os
import sys
import time
from logging import StreamHandler
from logging.handlers import RotatingFileHandler
try:
    from tomllib import load
except ModuleNotFoundError:  # Python < 3.11
    from tomli import load

from dotenv import load_dotenv

from models.exceptions import (ConfigurationError, DimensionMismatchError, NonHermitianError, NumericalError)
from utilities.command_utility import COMMAND_NAMES, CommandUtility
from utilities.config import Config, DEFAULT_CONFIG_PATH

USER_ERRORS = (ConfigurationError, DimensionMismatchError, NonHermitianError, ValueError)


class ArgumentParser(argparse.ArgumentParser):
    """
    Argument parser that exits with the user error code instead of argparse's 2.
    """

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        report_error('UsageError', message)
        sys.exit(1)


def report_error(error: str, message: str) -> None:
    sys.stderr.write(json.dumps({'error': error, 'message': message}) + '\n')


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog='localizer-lab',
                            description="Spectral localizer and Clifford spectrum of Hermitian matrix tuples.")
    subparsers = parser.add_subparsers(dest='command', required=True, parser_class=ArgumentParser)
    for name in COMMAND_NAMES:
        strategy = CommandUtility.get_command_strategy(name)
        subparser = subparsers.add_parser(name, help=strategy.help, description=strategy.help)
        strategy.add_arguments(subparser)
        subparser.set_defaults(handler=strategy)
    return parser


def dispatch(argv: list[str]) -> int:
    """
    Parses the command line and runs the chosen subcommand.
    :param argv: Arguments without the program name.
    :return: The exit code. 0 on success, 1 for usage or configuration errors, 2 for numerical failures.
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    start = time.time()
    try:
        code = args.handler.run(args)
    except USER_ERRORS as e:
        logging.debug(f"{args.command} failed.", exc_info=True)
        report_error(type(e).__name__, str(e))
        return 1
    except NumericalError as e:
        logging.debug(f"{args.command} failed.", exc_info=True)
        report_error(type(e).__name__, str(e))
        return 2
    logging.info(f"Finished {args.command} in {round(time.time() - start, 2)} seconds.")
    return code


def init_logging() -> None:
    """
    Initializes logging for the program. Logs go to stderr; stdout carries results.
    :return: None
    """
    logging.getLogger("asyncio").setLevel(logging.WARNING)

    log_level = logging.DEBUG if config['debug']['debug'] else logging.INFO
    log_format = "%(asctime)s %(levelname)s %(message)s"
    logging.basicConfig(
        format=log_format,
        level=log_level,
        handlers=[StreamHandler(sys.stderr)]
    )

    if config['debug']['use_log_file']:
        log_dir = 'logs'
        if not os.path.exists(log_dir):
            os.makedirs(log_dir)
        log_file = os.path.join(log_dir, config['debug']['debug_filename'])
        file_handler = RotatingFileHandler(
            log_file,
            maxBytes=10 * (10 ** 6),
            backupCount=1)
        file_handler.setLevel(log_level)
        file_handler.setFormatter(logging.Formatter(log_format))
        logging.getLogger().addHandler(file_handler)


if __name__ == "__main__":
    load_dotenv()
    with open(DEFAULT_CONFIG_PATH, 'rb') as cfg_file:
        config = Config(load(cfg_file)).value
    init_logging()
    sys.exit(dispatch(sys.argv[1:]))
