import abc
import argparse
import json
import logging
import sys
import time

from models.clifford_rep import CliffordRep
from models.exceptions import ConfigurationError
from models.lattice_model import LoadedModel
from models.run_manifest import RunManifest
from utilities.clifford_utility import CliffordUtility
from utilities.config import Config
from utilities.model_utility import ModelUtility

UNITS_NOTE = ("Lattice coordinates are in units of the lattice constant a and energies in units of the "
              "hopping t; other tuples are probed directly in lambda units.")


class CommandStrategy(abc.ABC):
    """
    Abstract base class for the subcommands of the command line.
    """
    name: str = ''
    help: str = ''

    def __init__(self):
        self._start = time.time()

    @staticmethod
    @abc.abstractmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        """
        Abstract method for registering the subcommand's flags.
        :param parser: The subcommand's parser.
        """

    @abc.abstractmethod
    def run(self, args: argparse.Namespace) -> int:
        """
        Abstract method for running the subcommand.
        :param args: Parsed flags.
        :return: The exit code.
        """

    @staticmethod
    def add_model_argument(parser: argparse.ArgumentParser) -> None:
        parser.add_argument('--model', '--config', dest='model', required=True,
                            help="Model JSON file or preset: builtin:pauli, builtin:gamma:<d>, builtin:abc:<t>, "
                                 "builtin:fuzzy:<n>, builtin:haldane[:<cells>], builtin:ai4d[:<N>], "
                                 "builtin:a4d[:<N>].")

    @staticmethod
    def add_rep_argument(parser: argparse.ArgumentParser) -> None:
        parser.add_argument('--rep', choices=['auto', 'pauli', 'gamma5', 'recursive'], default='auto',
                            help="Clifford representation. auto uses gamma5 for the 4D lattice, "
                                 "Pauli for d = 3 and the recursive construction otherwise.")
        parser.add_argument('--negate-orientation', action='store_true',
                            help="Use the negated odd-d representation; flips every signature.")

    @staticmethod
    def add_threads_argument(parser: argparse.ArgumentParser) -> None:
        parser.add_argument('--threads', type=int, default=None,
                            help="Size of the evaluation pool. Defaults to LOCALIZER_LAB_THREADS, "
                                 "then [scan] threads, then all CPUs.")

    @staticmethod
    def load_model(args: argparse.Namespace) -> LoadedModel:
        return ModelUtility.get_model_source_strategy(args.model).load()

    @staticmethod
    def select_rep(model: LoadedModel, args: argparse.Namespace) -> CliffordRep:
        name = model.rep_name if args.rep == 'auto' else args.rep
        rep = CliffordUtility.get_rep(name, model.tuple.d)
        negate = args.negate_orientation or Config().negate_orientation
        return rep.negated() if negate else rep

    @staticmethod
    def parse_vector(text: str, d: int, flag: str) -> list:
        try:
            values = [float(value) for value in text.split(',')]
        except ValueError as e:
            raise ConfigurationError(f"{flag} needs comma-separated numbers, got '{text}'.") from e
        if len(values) != d:
            raise ConfigurationError(f"{flag} needs {d} values, got {len(values)}.")
        return values

    @staticmethod
    def print_json(data) -> None:
        sys.stdout.write(json.dumps(data) + '\n')

    def write_manifest(self, output, args: argparse.Namespace, config: dict | None = None,
                       seed: int | None = None) -> None:
        params = {key: value for key, value in vars(args).items() if key != 'handler'}
        manifest = RunManifest(
            subcommand=self.name,
            params=params,
            seed=Config().solver_seed if seed is None else seed,
            config_hash=RunManifest.hash_config(config if config is not None else params),
            wall_time=round(time.time() - self._start, 3),
            outputs=[str(output)]
        )
        path = manifest.write(output)
        logging.info(f"Wrote {output} and {path}.")
