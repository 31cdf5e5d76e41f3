import argparse
import logging
import math

import numpy as np

from strategies.command.command_strategy import CommandStrategy
from utilities.config import Config
from utilities.serialization_utility import SerializationUtility
from utilities.spectrum_utility import SpectrumUtility
from utilities.statistics import Statistics


class ComponentsCommandStrategy(CommandStrategy):
    """
    Counts the connected components of the zero set stored in a scan file.
    """
    name = 'components'
    help = 'Count connected components of the eps-sublevel set of a scan (lambda units).'

    @staticmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument('--in', dest='scan', required=True, help="Scan CSV written by the scan subcommand.")
        parser.add_argument('--eps', type=float, default=None,
                            help="Zero-set threshold on the gap. Default 1.5 x grid step.")
        parser.add_argument('--radius', type=float, default=None,
                            help="Linking radius in lambda units. Default 2 x grid step x sqrt(varying axes).")

    def run(self, args: argparse.Namespace) -> int:
        points, gaps, _ = SerializationUtility.read_scan_csv(args.scan)
        step = SpectrumUtility.infer_step(points)
        varying = sum(len(np.unique(column)) > 1 for column in points.T)
        eps = Config().zero_set_eps_factor * step if args.eps is None else args.eps
        radius = (Config().linking_radius_factor * step * math.sqrt(varying)
                  if args.radius is None else args.radius)
        with np.errstate(invalid='ignore'):
            selected = points[gaps <= eps]
        count, labels = SpectrumUtility.component_count(selected, radius)
        sizes = np.bincount(labels, minlength=count).tolist() if count else []
        if sizes:
            logging.info(f"Zero-set components:\n{Statistics.component_table(sizes)}")
        CommandStrategy.print_json({'components': count, 'sizes': sizes, 'points': int(len(selected)),
                                    'eps': eps, 'radius': radius,
                                    'failed_points': int(np.count_nonzero(np.isnan(gaps)))})
        return 0
