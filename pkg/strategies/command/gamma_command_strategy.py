import argparse

from strategies.command.command_strategy import CommandStrategy
from utilities.clifford_utility import CliffordUtility
from utilities.serialization_utility import SerializationUtility


class GammaCommandStrategy(CommandStrategy):
    """
    Emits Clifford generators as JSON.
    """
    name = 'gamma'
    help = 'Print the generators of a Clifford representation as JSON.'

    @staticmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument('--d', type=int, required=True, help="Number of generators (dimensionless).")
        parser.add_argument('--explicit-5', action='store_true',
                            help="Use the explicit 4x4 generators of the 4D lattice localizer (needs --d 5).")
        parser.add_argument('--negate', action='store_true', help="Negate every generator.")
        parser.add_argument('--out', help="Write the JSON here instead of stdout.")

    def run(self, args: argparse.Namespace) -> int:
        rep = CliffordUtility.get_rep('gamma5' if args.explicit_5 else 'recursive', args.d)
        if args.negate:
            rep = rep.negated()
        data = SerializationUtility.rep_to_dict(rep)
        if args.out:
            SerializationUtility.write_json(args.out, data)
            self.write_manifest(args.out, args)
        else:
            CommandStrategy.print_json(data)
        return 0
