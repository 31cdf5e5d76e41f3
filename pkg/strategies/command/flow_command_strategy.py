import argparse

import numpy as np

from strategies.command.command_strategy import CommandStrategy, UNITS_NOTE
from utilities.serialization_utility import SerializationUtility
from utilities.spectrum_utility import SpectrumUtility


class FlowCommandStrategy(CommandStrategy):
    """
    Eigenvalues of the localizer nearest zero along a segment, as plot-ready CSV.
    """
    name = 'flow'
    help = 'Spectral flow of the k eigenvalues nearest zero along a segment. ' + UNITS_NOTE

    @staticmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        CommandStrategy.add_model_argument(parser)
        parser.add_argument('--from', dest='start', required=True, help="Segment start v1,...,vd (physical units).")
        parser.add_argument('--to', dest='end', required=True, help="Segment end v1,...,vd (physical units).")
        parser.add_argument('--steps', type=int, default=101, help="Number of points on the segment.")
        parser.add_argument('--k', type=int, default=None, help="Eigenvalues per step. Default [localizer] eig_window_k.")
        CommandStrategy.add_rep_argument(parser)
        CommandStrategy.add_threads_argument(parser)
        parser.add_argument('--out', required=True, help="Output CSV: step, s, lambda1..lambdad, eig1..eigk.")

    def run(self, args: argparse.Namespace) -> int:
        model = CommandStrategy.load_model(args)
        rep = CommandStrategy.select_rep(model, args)
        d = model.tuple.d
        start = model.to_lambda(CommandStrategy.parse_vector(args.start, d, '--from'))
        end = model.to_lambda(CommandStrategy.parse_vector(args.end, d, '--to'))
        parameters, eigenvalues = SpectrumUtility.spectral_flow(model.tuple, rep, start, end, args.steps,
                                                                k=args.k, threads=args.threads)
        points = start + np.outer(parameters, end - start)
        SerializationUtility.write_flow_csv(args.out, parameters, points, eigenvalues)
        self.write_manifest(args.out, args, model.config)
        return 0
