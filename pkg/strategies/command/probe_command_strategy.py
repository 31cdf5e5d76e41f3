import argparse

from models.hermitian_tuple import ProbePoint
from strategies.command.command_strategy import CommandStrategy, UNITS_NOTE
from utilities.localizer_utility import LocalizerUtility
from utilities.serialization_utility import SerializationUtility


class ProbeCommandStrategy(CommandStrategy):
    name = 'probe'
    help = 'Gap, signature, index and eigenvalues nearest zero at one point. ' + UNITS_NOTE

    @staticmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        CommandStrategy.add_model_argument(parser)
        parser.add_argument('--lambda', dest='probe', required=True,
                            help="Probe point v1,...,vd: positions in a, energy in t for lattices "
                                 "(x,y,E or x1,x2,x3,x4,E).")
        CommandStrategy.add_rep_argument(parser)
        parser.add_argument('--k', type=int, default=None, help="Number of eigenvalues nearest zero to report.")
        parser.add_argument('--out', help="Write the JSON here instead of stdout.")

    def run(self, args: argparse.Namespace) -> int:
        model = CommandStrategy.load_model(args)
        rep = CommandStrategy.select_rep(model, args)
        physical = CommandStrategy.parse_vector(args.probe, model.tuple.d, '--lambda')
        point = ProbePoint.of(model.to_lambda(physical))
        report = LocalizerUtility.probe(model.tuple, point, rep, k=args.k, negate_orientation=False)
        data = report.to_dict()
        if args.out:
            SerializationUtility.write_json(args.out, data)
            self.write_manifest(args.out, args, model.config)
        else:
            CommandStrategy.print_json(data)
        return 0
