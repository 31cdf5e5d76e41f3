import abc
import logging
import math

import numpy as np

from models.exceptions import ConfigurationError
from models.hermitian_tuple import HermitianTuple
from models.lattice_model import LoadedModel
from utilities.clifford_utility import CliffordUtility
from utilities.model_utility import ModelUtility
from utilities.serialization_utility import SerializationUtility


class ModelSourceStrategy(abc.ABC):
    """
    Abstract base class for model sources. A source yields a model record
    {"model": kind, "params": {...}, "scale": {...}} which is built here.
    """

    @abc.abstractmethod
    def get_config(self) -> dict:
        """
        Abstract method for getting the model record.
        :return: The record.
        """

    def load(self) -> LoadedModel:
        config = self.get_config()
        model = ModelSourceStrategy.build(config)
        logging.debug(f"Loaded '{model.tuple.label}' with d={model.tuple.d}, n={model.tuple.n}.")
        return model

    @staticmethod
    def build(config: dict) -> LoadedModel:
        """
        Builds the tuple described by a model record.
        :param config: The record.
        :return: The loaded model, scaled when it is a lattice.
        """
        if not isinstance(config, dict) or 'model' not in config:
            raise ConfigurationError("A model record needs a 'model' entry.")
        kind = config['model']
        params = dict(config.get('params', {}))
        scale = dict(config.get('scale', {}))
        try:
            match kind:
                case 'pauli':
                    rep = CliffordUtility.pauli_rep()
                    return ModelSourceStrategy.__plain(HermitianTuple(rep.gammas, label='pauli'), 'pauli', config)
                case 'gamma':
                    d = int(params['d'])
                    rep = CliffordUtility.build_rep(d)
                    return ModelSourceStrategy.__plain(HermitianTuple(rep.gammas, label=f"gamma d={d}"),
                                                       'recursive', config)
                case 'abc':
                    return ModelSourceStrategy.__plain(ModelUtility.example_abc(float(params.get('t', 1.0))),
                                                       'pauli', config)
                case 'fuzzy':
                    return ModelSourceStrategy.__plain(ModelUtility.fuzzy_sphere(int(params.get('n', 2))),
                                                       'pauli', config)
                case 'tuple':
                    matrices = tuple(SerializationUtility.from_complex_pairs(matrix) for matrix in params['matrices'])
                    tuple_ = HermitianTuple(matrices, label=params.get('label', 'user tuple'))
                    return ModelSourceStrategy.__plain(tuple_, 'auto', config)
                case 'haldane':
                    lattice = ModelUtility.haldane(
                        int(params.get('n1', 12)), int(params.get('n2', params.get('n1', 12))),
                        mass=float(params.get('M', 0.0)), t=float(params.get('t', 1.0)),
                        t_c=float(params.get('t_c', 0.5)), phi=float(params.get('phi', math.pi / 6)),
                        a=float(params.get('a', 1.0)), chirality=int(params.get('chirality', 1)))
                    scaled, _ = ModelUtility.scale_2d(lattice, float(scale.get('kappa_x', 1.0)),
                                                      float(scale.get('kappa_h', 1.0)))
                    return LoadedModel(tuple=scaled.tuple, rep_name='pauli', axis_names=scaled.axis_names,
                                       axis_scales=scaled.axis_scales, config=config, lattice=lattice)
                case 'lattice4d':
                    lattice = ModelUtility.lattice4d(
                        int(params.get('N', 5)), mass=float(params.get('M', 0.5)), t=float(params.get('t', 1.0)),
                        t1=SerializationUtility.complex_value(params.get('t1', 0.8)), a=float(params.get('a', 1.0)))
                    scaled, _ = ModelUtility.scale_4d(lattice, float(scale.get('kappa', 0.1)))
                    return LoadedModel(tuple=scaled.tuple, rep_name='gamma5', axis_names=scaled.axis_names,
                                       axis_scales=scaled.axis_scales, config=config, lattice=lattice)
                case _:
                    raise ConfigurationError(f"Unknown model kind: {kind}")
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigurationError(f"Invalid parameters for model '{kind}': {e}") from e

    @staticmethod
    def __plain(tuple_: HermitianTuple, rep_name: str, config: dict) -> LoadedModel:
        return LoadedModel(tuple=tuple_, rep_name=rep_name,
                           axis_names=[f"lambda{j + 1}" for j in range(tuple_.d)],
                           axis_scales=tuple(np.ones(tuple_.d)), config=config)
