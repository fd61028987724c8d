"""
Output Export Service
Writes run outputs (JSON, JSONL, CSV, PNG, text) atomically with run metadata.
"""

import csv
import hashlib
import io
import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from PIL import Image

from ticktock.utils.errors import OutputError

logger = logging.getLogger(__name__)

METADATA_FILENAME = 'metadata.json'


def file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 20), b''):
            digest.update(chunk)
    return digest.hexdigest()


def png_bytes(image: Image.Image) -> bytes:
    """Encode a PIL image as PNG with no timestamp or text chunks."""
    buffer = io.BytesIO()
    image.save(buffer, format='PNG', optimize=False, compress_level=6)
    return buffer.getvalue()


@dataclass
class RunMetadata:
    """Header written alongside every output set."""
    tool_version: str
    command: str
    effective_config: Dict[str, Any] = field(default_factory=dict)
    input_digests: Dict[str, str] = field(default_factory=dict)
    reproducible: bool = False

    def add_input(self, label: str, path: Optional[Path]):
        if path is not None:
            self.input_digests[label] = file_sha256(Path(path))

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'tool_version': self.tool_version,
            'command': self.command,
            'effective_config': dict(sorted(self.effective_config.items())),
            'input_digests': dict(sorted(self.input_digests.items())),
        }
        if not self.reproducible:
            data['timestamp'] = datetime.now(timezone.utc).isoformat()
        return data


class OutputSession:
    """Collects the outputs of one run under out_dir.

    Every file is staged to a temporary sibling and moved into place. If the
    session exits with an exception, every file it placed is removed again.
    """

    def __init__(self, out_dir: Path, metadata: RunMetadata):
        self.out_dir = Path(out_dir)
        self.metadata = metadata
        self.written: List[Path] = []
        self._created_dir = False

    def __enter__(self) -> 'OutputSession':
        try:
            if not self.out_dir.exists():
                self.out_dir.mkdir(parents=True)
                self._created_dir = True
            elif not self.out_dir.is_dir():
                raise OutputError("Output path is not a directory", str(self.out_dir))
            if not os.access(self.out_dir, os.W_OK):
                raise OutputError("Output directory is not writable", str(self.out_dir))
        except OSError as e:
            raise OutputError(f"Cannot create output directory ({e.strerror})", str(self.out_dir))
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is None:
            self.write_json(METADATA_FILENAME, self.metadata.to_dict())
            logger.info(f"Wrote {len(self.written)} files to {self.out_dir}")
            return False

        logger.error(f"Run failed, removing {len(self.written)} partial outputs from {self.out_dir}")
        self.discard()
        return False

    def discard(self):
        for path in reversed(self.written):
            try:
                path.unlink()
            except FileNotFoundError:
                pass
        self.written.clear()
        if self._created_dir:
            for directory in sorted(self.out_dir.rglob('*'), reverse=True):
                if directory.is_dir() and not any(directory.iterdir()):
                    directory.rmdir()
            if not any(self.out_dir.iterdir()):
                self.out_dir.rmdir()

    def write_bytes(self, name: str, data: bytes) -> Path:
        target = self.out_dir / name
        tmp_name = None
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp_name = tempfile.mkstemp(dir=target.parent, prefix=f'.{target.name}.', suffix='.tmp')
            with os.fdopen(fd, 'wb') as f:
                f.write(data)
            os.replace(tmp_name, target)
        except OSError as e:
            if tmp_name and os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise OutputError(f"Cannot write output ({e.strerror})", str(target))
        self.written.append(target)
        return target

    def write_text(self, name: str, text: str) -> Path:
        return self.write_bytes(name, text.encode('utf-8'))

    def write_json(self, name: str, data: Any) -> Path:
        return self.write_text(name, json.dumps(data, indent=2, ensure_ascii=False) + '\n')

    def write_report(self, name: str, data: Dict[str, Any]) -> Path:
        """JSON document with the run metadata embedded under 'metadata'."""
        document = {'metadata': self.metadata.to_dict()}
        document.update(data)
        return self.write_json(name, document)

    def write_jsonl(self, name: str, rows: Iterable[Dict[str, Any]]) -> Path:
        lines = [json.dumps(row, ensure_ascii=False) for row in rows]
        return self.write_text(name, ''.join(line + '\n' for line in lines))

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
        return self.write_text(name, buffer.getvalue())
