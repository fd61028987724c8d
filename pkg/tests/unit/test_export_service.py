import json
import os
import sys

import pytest
from PIL import Image

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..'))

from ticktock.services.export_service import METADATA_FILENAME, OutputSession, RunMetadata, png_bytes
from ticktock.utils.errors import OutputError

pytestmark = pytest.mark.unit


def _metadata(reproducible=True):
    return RunMetadata(tool_version='1.0.0', command='qc stats',
                       effective_config={'jobs': {'value': 1, 'source': 'default'}},
                       reproducible=reproducible)


class TestRunMetadata:
    """Test metadata header"""

    def test_reproducible_omits_timestamp(self):
        assert 'timestamp' not in _metadata(True).to_dict()
        assert 'timestamp' in _metadata(False).to_dict()

    def test_input_digest(self, tmp_path):
        path = tmp_path / 'empty.jsonl'
        path.write_bytes(b'')
        metadata = _metadata()
        metadata.add_input('annotations', path)
        metadata.add_input('predictions', None)
        assert metadata.to_dict()['input_digests'] == {
            'annotations': 'e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855',
        }


class TestOutputSession:
    """Test atomic output sessions"""

    def test_success_writes_metadata(self, tmp_path):
        out_dir = tmp_path / 'run'
        with OutputSession(out_dir, _metadata()) as session:
            session.write_jsonl('rows.jsonl', [{'id': 'a'}, {'id': 'b'}])
            session.write_csv('table.csv', ['k', 'v'], [('x', 1)])
            session.write_report('report.json', {'n': 2})

        assert (out_dir / 'rows.jsonl').read_text() == '{"id": "a"}\n{"id": "b"}\n'
        assert (out_dir / 'table.csv').read_text() == 'k,v\nx,1\n'
        report = json.loads((out_dir / 'report.json').read_text())
        assert report['n'] == 2
        assert report['metadata']['command'] == 'qc stats'
        assert json.loads((out_dir / METADATA_FILENAME).read_text()) == report['metadata']
        assert not [p for p in out_dir.iterdir() if p.name.endswith('.tmp')]

    def test_failure_removes_partial_outputs(self, tmp_path):
        out_dir = tmp_path / 'run'
        with pytest.raises(RuntimeError):
            with OutputSession(out_dir, _metadata()) as session:
                session.write_text('nested/a.txt', 'partial')
                raise RuntimeError('stage failed')
        assert not out_dir.exists()

    def test_failure_keeps_existing_files(self, tmp_path):
        (tmp_path / 'keep.txt').write_text('mine')
        with pytest.raises(RuntimeError):
            with OutputSession(tmp_path, _metadata()) as session:
                session.write_text('new.txt', 'partial')
                raise RuntimeError('stage failed')
        assert sorted(p.name for p in tmp_path.iterdir()) == ['keep.txt']

    def test_out_dir_is_a_file(self, tmp_path):
        target = tmp_path / 'file'
        target.write_text('x')
        with pytest.raises(OutputError):
            with OutputSession(target, _metadata()):
                pass

    def test_unwritable_output(self, tmp_path, mocker):
        mocker.patch('ticktock.services.export_service.os.replace', side_effect=PermissionError(13, 'denied'))
        with pytest.raises(OutputError) as info:
            with OutputSession(tmp_path / 'run', _metadata()) as session:
                session.write_text('a.txt', 'x')
        assert info.value.error_code == 'IO_002'
        assert not (tmp_path / 'run').exists()

    def test_png_bytes_deterministic(self):
        image = Image.new('RGB', (8, 8), (10, 20, 30))
        assert png_bytes(image) == png_bytes(image.copy())
        assert png_bytes(image).startswith(b'\x89PNG')
