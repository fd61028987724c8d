"""
Image Fingerprint Service
SHA-1 digests and 64-bit DCT / Haar perceptual hashes for duplicate detection.
"""

import functools
import hashlib
import logging
from io import BytesIO
from pathlib import Path
from typing import Iterable, List, Tuple

import imagehash
import numpy as np
from PIL import Image
from scipy.fft import dct

from ticktock.models.quality import FingerprintedRecord, ImageFingerprint
from ticktock.utils import log_execution_time, ordered_map
from ticktock.utils.errors import ImageDecodeError

logger = logging.getLogger(__name__)

HASH_SIZE = 8
HASH_IMAGE_SCALE = 32


def bits_to_int(bits: np.ndarray) -> int:
    """Pack a boolean array row-major, first element in the most significant bit."""
    value = 0
    for bit in np.asarray(bits, dtype=bool).reshape(-1):
        value = (value << 1) | int(bit)
    return value


def hamming(a: int, b: int) -> int:
    return bin(a ^ b).count('1')


def decode_image(data: bytes, path: str = '<bytes>') -> Image.Image:
    try:
        image = Image.open(BytesIO(data))
        image.load()
    except Exception as e:
        logger.error(f"Cannot decode image {path}: {str(e)}")
        raise ImageDecodeError("Undecodable image", path)
    return image


def phash(image: Image.Image) -> int:
    """DCT hash of the 32x32 grayscale downsample.

    Takes the sign pattern (coefficient > 0) of the top-left 8x8 DCT block in
    row-major order and stores a fill bit 0 in the DC position (bit 63).
    """
    gray = image.convert('L').resize((HASH_IMAGE_SCALE, HASH_IMAGE_SCALE), Image.Resampling.LANCZOS)
    pixels = np.asarray(gray, dtype=np.float64)
    coefficients = dct(dct(pixels, axis=0), axis=1)
    low = coefficients[:HASH_SIZE, :HASH_SIZE].reshape(-1)
    bits = low > 0
    bits[0] = False
    return bits_to_int(bits)


def whash(image: Image.Image) -> int:
    """Median-thresholded level-2 Haar approximation (8x8) of the 32x32 grayscale downsample."""
    value = imagehash.whash(image, hash_size=HASH_SIZE, image_scale=HASH_IMAGE_SCALE,
                            mode='haar', remove_max_haar_ll=False)
    return bits_to_int(value.hash)


def fingerprint(data: bytes, path: str = '<bytes>') -> ImageFingerprint:
    sha1 = hashlib.sha1(data).hexdigest()
    image = decode_image(data, path)
    return ImageFingerprint(sha1=sha1, phash=phash(image), whash=whash(image))


def fingerprint_file(path: Path) -> ImageFingerprint:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ImageDecodeError(f"Cannot read image ({e.strerror})", str(path))
    return fingerprint(data, str(path))


def _fingerprint_item(item: Tuple[str, str, str], image_root: str) -> FingerprintedRecord:
    record_id, image_path, source = item
    return FingerprintedRecord(id=record_id, fingerprint=fingerprint_file(Path(image_root) / image_path),
                               source=source)


class FingerprintService:
    """Fingerprints dataset images, optionally in parallel."""

    def __init__(self, image_root: Path):
        self.image_root = Path(image_root)
        logger.info(f"Fingerprint service initialized (root={self.image_root})")

    @log_execution_time
    def fingerprint_records(self, items: Iterable[Tuple[str, str, str]], jobs: int = 1) -> List[FingerprintedRecord]:
        """items are (id, relative image path, source) triples."""
        worker = functools.partial(_fingerprint_item, image_root=str(self.image_root))
        return ordered_map(worker, list(items), jobs=jobs, chunksize=16)
