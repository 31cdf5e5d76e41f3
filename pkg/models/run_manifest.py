import hashlib
import json
from dataclasses import dataclass, asdict, field
from pathlib import Path

VERSION = '1.0.0'


@dataclass
class RunManifest:
    """
    Written next to every output file so a run can be repeated with the same inputs.
    """
    subcommand: str
    params: dict
    seed: int | None
    config_hash: str
    wall_time: float = 0.0
    version: str = VERSION
    outputs: list = field(default_factory=list)

    @staticmethod
    def hash_config(config: dict) -> str:
        return hashlib.sha256(json.dumps(config, sort_keys=True, default=str).encode('utf8')).hexdigest()

    @staticmethod
    def path_for(output: str | Path) -> Path:
        output = Path(output)
        return output.with_name(output.name + '.manifest.json')

    def write(self, output: str | Path) -> Path:
        path = RunManifest.path_for(output)
        with open(path, 'w', encoding='utf8') as f:
            json.dump(asdict(self), f, indent=2, sort_keys=True, default=str)
        return path
