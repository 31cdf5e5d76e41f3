import math

from models.exceptions import ConfigurationError
from strategies.model_source.model_source_strategy import ModelSourceStrategy

PRESET_T1_AI = 0.8
PRESET_T1_A = [0.8 * math.cos(0.1 * math.pi), 0.8 * math.sin(0.1 * math.pi)]


class BuiltinModelSourceStrategy(ModelSourceStrategy):
    """
    Concrete strategy for the named presets builtin:pauli, builtin:gamma:<d>, builtin:abc:<t>,
    builtin:fuzzy:<n>, builtin:haldane[:<cells>], builtin:ai4d[:<N>] and builtin:a4d[:<N>].
    Lattice presets use t = 1 and a = 1.
    """

    def __init__(self, name: str):
        self.__name = name

    def get_config(self) -> dict:
        parts = self.__name.split(':')
        if parts[0] != 'builtin' or len(parts) < 2:
            raise ConfigurationError(f"Not a builtin model name: {self.__name}")
        kind = parts[1]
        argument = parts[2] if len(parts) > 2 else None
        try:
            match kind:
                case 'pauli':
                    return {'model': 'pauli'}
                case 'gamma':
                    if argument is None:
                        raise ConfigurationError("builtin:gamma needs a dimension, e.g. builtin:gamma:5")
                    return {'model': 'gamma', 'params': {'d': int(argument)}}
                case 'abc':
                    return {'model': 'abc', 'params': {'t': float(argument) if argument else 1.0}}
                case 'fuzzy':
                    return {'model': 'fuzzy', 'params': {'n': int(argument) if argument else 2}}
                case 'haldane':
                    cells = int(argument) if argument else 12
                    return {'model': 'haldane',
                            'params': {'n1': cells, 'n2': cells, 'M': 0.0, 't': 1.0, 't_c': 0.5, 'phi': math.pi / 6},
                            'scale': {'kappa_x': 1.0, 'kappa_h': 1.0}}
                case 'ai4d' | 'a4d':
                    t1 = PRESET_T1_AI if kind == 'ai4d' else PRESET_T1_A
                    return {'model': 'lattice4d',
                            'params': {'N': int(argument) if argument else 5, 'M': 0.5, 't': 1.0, 't1': t1},
                            'scale': {'kappa': 0.1}}
                case _:
                    raise ConfigurationError(f"Unknown builtin model: {self.__name}")
        except ValueError as e:
            raise ConfigurationError(f"Invalid argument in builtin model name {self.__name}: {e}") from e
