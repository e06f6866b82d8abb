"""
Run manifests.

A manifest records everything needed to reproduce one CLI invocation and is
written next to that invocation's outputs.
"""

from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from . import jsonio

TOOL_VERSION = "1.0.0"
MANIFEST_NAME = "manifest.json"


@dataclass
class RunManifest:
    """Command, resolved configuration and outputs of one run."""
    command: str
    config: Dict[str, Any]
    seed: Optional[int]
    tool_version: str = TOOL_VERSION
    outputs: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunManifest':
        return cls(
            command=data['command'],
            config=dict(data.get('config', {})),
            seed=data.get('seed'),
            tool_version=data.get('tool_version', TOOL_VERSION),
            outputs=list(data.get('outputs', [])),
        )

    def save(self, out_dir: Union[str, Path]) -> Path:
        return jsonio.save_json(self.to_dict(), Path(out_dir) / MANIFEST_NAME)

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'RunManifest':
        return cls.from_dict(jsonio.load_json(path))
