import argparse

import scipy.sparse as sp

from strategies.command.command_strategy import CommandStrategy, UNITS_NOTE
from utilities.serialization_utility import SerializationUtility


class BuildCommandStrategy(CommandStrategy):
    """
    Builds a model and writes it out. Lattices become COO JSON plus a site table;
    other tuples become a reusable 'tuple' model record.
    """
    name = 'build'
    help = 'Build a model and write its matrices. ' + UNITS_NOTE

    @staticmethod
    def add_arguments(parser: argparse.ArgumentParser) -> None:
        CommandStrategy.add_model_argument(parser)
        parser.add_argument('--out', required=True, help="Output JSON file. Lattices also get <out>.sites.csv.")

    def run(self, args: argparse.Namespace) -> int:
        model = CommandStrategy.load_model(args)
        if model.lattice is not None:
            data = SerializationUtility.model_to_dict(model.lattice)
            data['config'] = model.config
            SerializationUtility.write_json(args.out, data)
            sites = SerializationUtility.sites_path(args.out)
            SerializationUtility.write_sites_csv(model.lattice, sites)
            self.write_manifest(sites, args, model.config)
        else:
            matrices = [matrix.toarray() if sp.issparse(matrix) else matrix for matrix in model.tuple.matrices]
            data = {'model': 'tuple',
                    'params': {'label': model.tuple.label,
                               'matrices': [SerializationUtility.complex_pairs(matrix) for matrix in matrices]}}
            SerializationUtility.write_json(args.out, data)
        self.write_manifest(args.out, args, model.config)
        return 0
