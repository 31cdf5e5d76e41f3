from pathlib import Path

from strategies.model_source.model_source_strategy import ModelSourceStrategy
from utilities.serialization_utility import SerializationUtility


class FileModelSourceStrategy(ModelSourceStrategy):
    """
    Concrete strategy for model records stored as JSON files.
    """

    def __init__(self, path: str | Path):
        self.__path = Path(path)

    @property
    def path(self) -> Path:
        return self.__path

    def get_config(self) -> dict:
        return SerializationUtility.read_json(self.__path)
