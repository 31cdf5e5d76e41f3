import argparse
from collections import Counter

import numpy as np

from models.exceptions import ConfigurationError
from strategies.command.command_strategy import CommandStrategy, UNITS_NOTE
from strategies.command.scan_command_strategy import ScanCommandStrategy
from utilities.serialization_utility import SerializationUtility
from utilities.spectrum_utility import SpectrumUtility


class RaysCommandStrategy(CommandStrategy):
    """
    Counts spectrum crossings along random rays leaving a point.
    """
    name = 'rays'
    help = 'Count Clifford spectrum crossings along random rays. Ray parameters are in lambda units. ' + UNITS_NOTE

    @staticmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        CommandStrategy.add_model_argument(parser)
        parser.add_argument('--n', type=int, default=40, help="Number of random directions.")
        parser.add_argument('--seed', type=int, default=7, help="Seed for the directions.")
        parser.add_argument('--axes', default=None,
                            help="Comma-separated axes the rays move along. Default: position axes for "
                                 "lattices (energy fixed), all axes otherwise.")
        parser.add_argument('--fixed', default='',
                            help="Ray origin as name=value in physical units, e.g. 'E=0'. Default the origin.")
        parser.add_argument('--t-max', type=float, default=None,
                            help="Ray length in lambda units. Default sum_j ||A_j||, beyond which the gap is positive.")
        parser.add_argument('--step', type=float, default=None, help="Sampling step. Default t-max / 400.")
        parser.add_argument('--eps', type=float, default=None, help="Crossing threshold on the gap. Default step.")
        CommandStrategy.add_rep_argument(parser)
        CommandStrategy.add_threads_argument(parser)
        parser.add_argument('--out', help="Write the JSON here instead of stdout.")

    def run(self, args: argparse.Namespace) -> int:
        model = CommandStrategy.load_model(args)
        rep = CommandStrategy.select_rep(model, args)
        d = model.tuple.d
        lookup = ScanCommandStrategy.axis_lookup(model)
        if args.axes:
            names = [name.strip() for name in args.axes.split(',') if name.strip()]
            unknown = [name for name in names if name not in lookup]
            if unknown:
                raise ConfigurationError(f"Unknown axes {unknown}; choose from {sorted(lookup)}.")
            axes = [lookup[name] for name in names]
        elif model.lattice is not None:
            axes = list(range(model.lattice.dimension))
        else:
            axes = list(range(d))
        origin = np.zeros(d)
        for axis, value in ScanCommandStrategy.parse_fixed(args.fixed, model).items():
            origin[axis] = value

        t_max = float(sum(model.tuple.norms)) if args.t_max is None else args.t_max
        step = t_max / 400 if args.step is None else args.step
        eps = step if args.eps is None else args.eps
        directions = SpectrumUtility.random_directions(args.n, d, axes, args.seed)
        counts = [SpectrumUtility.ray_crossings(model.tuple, rep, direction, t_max, step, eps,
                                                origin=origin, threads=args.threads)
                  for direction in directions]
        histogram = Counter(counts)
        data = {'counts': counts,
                'histogram': {str(key): histogram[key] for key in sorted(histogram)},
                'directions': directions.tolist(),
                't_max': t_max, 'step': step, 'eps': eps}
        if args.out:
            SerializationUtility.write_json(args.out, data)
            self.write_manifest(args.out, args, model.config, seed=args.seed)
        else:
            CommandStrategy.print_json(data)
        return 0
