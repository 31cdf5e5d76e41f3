import os
from pathlib import Path
try:
    from tomllib import load
except ModuleNotFoundError:  # Python < 3.11
    from tomli import load

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[1] / 'config.toml'
THREADS_ENV_VARIABLE = 'LOCALIZER_LAB_THREADS'


class Config:
    """
    Singleton class that holds the configuration for the program.
    """
    _instance = None
    _config: dict = None

    def __new__(cls, config: dict = None):
        if cls._instance is None:
            cls._instance = super(Config, cls).__new__(cls)
            if config is None:
                with open(DEFAULT_CONFIG_PATH, 'rb') as cfg_file:
                    config = load(cfg_file)
            cls._config = config
        return cls._instance

    @property
    def value(self) -> dict:
        return self._config

    @property
    def debug(self) -> bool:
        return self._config['debug']['debug']

    @property
    def detailed_statistics(self) -> bool:
        return self._config['debug']['detailed_statistics']

    @property
    def relation_tol(self) -> float:
        return self._config['clifford']['relation_tol']

    @property
    def gamma_hermiticity_tol(self) -> float:
        return self._config['clifford']['hermiticity_tol']

    @property
    def orientation_tol(self) -> float:
        return self._config['clifford']['orientation_tol']

    @property
    def orthogonality_tol(self) -> float:
        return self._config['clifford']['orthogonality_tol']

    @property
    def singular_tol_factor(self) -> float:
        return self._config['localizer']['singular_tol_factor']

    @property
    def dense_threshold(self) -> int:
        return self._config['localizer']['dense_threshold']

    @property
    def dense_fallback_limit(self) -> int:
        return self._config['localizer']['dense_fallback_limit']

    @property
    def eig_window_k(self) -> int:
        return self._config['localizer']['eig_window_k']

    @property
    def solver_seed(self) -> int:
        return self._config['localizer']['solver_seed']

    @property
    def solver_tol(self) -> float:
        return self._config['localizer']['solver_tol']

    @property
    def tuple_hermiticity_tol(self) -> float:
        return self._config['localizer']['hermiticity_tol']

    @property
    def negate_orientation(self) -> bool:
        return self._config['localizer']['negate_orientation']

    @property
    def zero_set_eps_factor(self) -> float:
        return self._config['scan']['zero_set_eps_factor']

    @property
    def linking_radius_factor(self) -> float:
        return self._config['scan']['linking_radius_factor']

    @property
    def slab_dir(self) -> str | None:
        return self._config['scan']['slab_dir'] or None

    @property
    def verify_settings(self) -> dict:
        return self._config['verify']

    def threads(self, requested: int | None = None) -> int:
        """
        Resolves the size of the scan pool.
        :param requested: Value given on the command line, if any.
        :return: The flag, else the environment variable, else the config file, else the CPU count.
        """
        if requested:
            return requested
        from_env = os.getenv(THREADS_ENV_VARIABLE)
        if from_env:
            return int(from_env)
        configured = self._config['scan']['threads']
        if configured:
            return configured
        return os.cpu_count() or 1
