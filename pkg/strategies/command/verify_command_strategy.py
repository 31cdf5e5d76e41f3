import argparse
import sys

from strategies.command.command_strategy import CommandStrategy
from utilities.config import Config
from utilities.serialization_utility import SerializationUtility
from utilities.statistics import Statistics
from utilities.verification_utility import VerificationUtility


class VerifyCommandStrategy(CommandStrategy):
    """
    Runs every closed-form check and prints a table. Exits 0 only when all pass.
    """
    name = 'verify'
    help = 'Numerically verify the closed-form Clifford spectrum theorems (dimensionless).'

    @staticmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument('--d-max', type=int, default=None, help="Largest d to check. Default [verify] d_max.")
        parser.add_argument('--seed', type=int, default=None, help="Seed for every random probe.")
        parser.add_argument('--json', dest='json_out', help="Write all theorem reports here as JSON.")
        parser.add_argument('--allow-large', action='store_true', help="Allow d-max above [verify] d_cap.")

    def run(self, args: argparse.Namespace) -> int:
        seed = Config().verify_settings['seed'] if args.seed is None else args.seed
        reports = VerificationUtility.run_all(args.d_max, seed, args.allow_large)
        statistics = Statistics(reports)
        sys.stdout.write(statistics.create_statistics(Config().detailed_statistics) + '\n')
        sys.stdout.write(statistics.summary() + '\n')
        if args.json_out:
            SerializationUtility.write_json(args.json_out, [report.to_dict() for report in reports])
            self.write_manifest(args.json_out, args, seed=seed)
        return 0 if all(report.passed for report in reports) else 2
