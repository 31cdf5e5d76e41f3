import argparse
from typing import Dict

from models.exceptions import ConfigurationError
from models.lattice_model import LoadedModel
from models.scan import ScanGrid
from strategies.command.command_strategy import CommandStrategy, UNITS_NOTE
from utilities.serialization_utility import SerializationUtility
from utilities.spectrum_utility import SpectrumUtility


class ScanCommandStrategy(CommandStrategy):
    """
    Gap and index maps on a rectangular grid, written as CSV in lambda units.
    """
    name = 'scan'
    help = 'Scan the localizer gap (and index) over a grid. ' + UNITS_NOTE

    @staticmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        CommandStrategy.add_model_argument(parser)
        parser.add_argument('--grid', required=True,
                            help="Varying axes as name=min:max:count, comma separated, e.g. "
                                 "'x1=-3:3:121,x2=-3:3:121'. Positions in a, energy in t. "
                                 "Names are the model's axes (x, y, E / x1..x4, E) or lambda1..lambdad.")
        parser.add_argument('--fixed', default='',
                            help="Values of non-varying axes as name=value, e.g. 'x3=0,x4=0,E=0'. Default 0.")
        parser.add_argument('--index', action='store_true', help="Also compute the localizer index.")
        CommandStrategy.add_rep_argument(parser)
        CommandStrategy.add_threads_argument(parser)
        parser.add_argument('--out', required=True, help="Output CSV: lambda1..lambdad, gap, index.")

    def run(self, args: argparse.Namespace) -> int:
        model = CommandStrategy.load_model(args)
        grid = ScanCommandStrategy.parse_grid(args.grid, args.fixed, model)
        rep = CommandStrategy.select_rep(model, args)
        result = SpectrumUtility.scan(model.tuple, rep, grid, with_index=args.index, threads=args.threads,
                                      meta=dict(config=model.config))
        SerializationUtility.write_scan_csv(result, args.out)
        self.write_manifest(args.out, args, model.config)
        return 0

    @staticmethod
    def axis_lookup(model: LoadedModel) -> Dict[str, int]:
        lookup = {f"lambda{j + 1}": j for j in range(model.tuple.d)}
        lookup.update({name: j for j, name in enumerate(model.axis_names)})
        return lookup

    @staticmethod
    def parse_grid(grid_text: str, fixed_text: str, model: LoadedModel) -> ScanGrid:
        """
        Parses the grid and fixed flags and converts them from physical units to lambda.
        """
        lookup = ScanCommandStrategy.axis_lookup(model)
        scales = model.axis_scales
        axes, ranges, resolution = [], [], []
        for entry in filter(None, (part.strip() for part in grid_text.split(','))):
            try:
                name, spec = entry.split('=')
                low, high, count = spec.split(':')
                axis = lookup[name.strip()]
                ranges.append((float(low) * scales[axis], float(high) * scales[axis]))
                resolution.append(int(count))
                axes.append(axis)
            except (ValueError, KeyError) as e:
                raise ConfigurationError(f"Invalid grid entry '{entry}'; expected name=min:max:count "
                                         f"with name in {sorted(lookup)}.") from e
        fixed = ScanCommandStrategy.parse_fixed(fixed_text, model)
        return ScanGrid(d=model.tuple.d, axes=tuple(axes), ranges=tuple(ranges),
                        resolution=tuple(resolution), fixed=fixed)

    @staticmethod
    def parse_fixed(fixed_text: str, model: LoadedModel) -> Dict[int, float]:
        """
        Parses name=value pairs in physical units into lambda values keyed by axis.
        """
        lookup = ScanCommandStrategy.axis_lookup(model)
        fixed = {}
        for entry in filter(None, (part.strip() for part in fixed_text.split(','))):
            try:
                name, value = entry.split('=')
                axis = lookup[name.strip()]
                fixed[axis] = float(value) * model.axis_scales[axis]
            except (ValueError, KeyError) as e:
                raise ConfigurationError(f"Invalid fixed entry '{entry}'; expected name=value "
                                         f"with name in {sorted(lookup)}.") from e
        return fixed
