#!/usr/bin/env python3
"""
Run reports: verdicts, witnesses and input digests of one CLI invocation.
"""

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .utils import format_ident, get_content_hash

SCHEMA_VERSION = 1


def to_jsonable(value):
    """Witness values to plain JSON: tuples become lists, other identifiers their text."""
    if isinstance(value, dict):
        return {str(format_ident(k)): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in value]
        return sorted(items, key=json.dumps) if isinstance(value, (set, frozenset)) else items
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    return format_ident(value)


@dataclass
class Report:
    command: str
    inputs: List[Dict[str, str]] = field(default_factory=list)
    verdicts: Dict[str, bool] = field(default_factory=dict)
    witnesses: Dict[str, Any] = field(default_factory=dict)
    elapsed_seconds: float = 0.0
    schema_version: int = SCHEMA_VERSION

    def add_input(self, name: str, content: str):
        self.inputs.append({'name': name, 'sha256': get_content_hash(content)})

    def verdict(self, name: str, holds: bool, witness=None):
        """Record a lemma outcome; the witness is kept only when given."""
        self.verdicts[name] = bool(holds)
        if witness is not None:
            self.witnesses[name] = to_jsonable(witness)

    def witness(self, name: str, value):
        self.witnesses[name] = to_jsonable(value)

    @property
    def failed(self) -> Optional[str]:
        for name, holds in self.verdicts.items():
            if not holds:
                return name
        return None

    @property
    def exit_status(self) -> int:
        return 0 if self.failed is None else 1

    def to_dict(self, include_timing: bool = True) -> Dict:
        data = {
            'schema_version': self.schema_version,
            'command': self.command,
            'inputs': list(self.inputs),
            'verdicts': dict(self.verdicts),
            'witnesses': dict(self.witnesses),
            'failed': self.failed,
        }
        if include_timing:
            data['elapsed_seconds'] = round(self.elapsed_seconds, 6)
        return data

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2)

    def digest(self) -> str:
        """SHA-256 of the JSON form without timing; equal for identical runs."""
        return hashlib.sha256(self.to_json(include_timing=False).encode('utf-8')).hexdigest()

    def to_text(self) -> str:
        lines = [f"{self.command}: {', '.join(i['name'] for i in self.inputs) or '-'}"]
        for name, holds in self.verdicts.items():
            lines.append(f"  {'PASS' if holds else 'FAIL'}  {name}")
        for name in sorted(self.witnesses):
            lines.append(f"  {name}: {json.dumps(self.witnesses[name], sort_keys=True)}")
        if self.failed:
            lines.append(f"failed: {self.failed}")
        return '\n'.join(lines)
