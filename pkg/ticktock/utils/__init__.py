import functools
import hashlib
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Iterable, List, TypeVar

import numpy as np

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def log_execution_time(func: Callable) -> Callable:
    """Decorator to log function execution time."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> Any:
        start_time = time.time()
        try:
            result = func(*args, **kwargs)
            execution_time = time.time() - start_time
            logger.info(f"Function {func.__name__} executed in {execution_time:.3f}s")
            return result
        except Exception as e:
            execution_time = time.time() - start_time
            logger.error(f"Function {func.__name__} failed after {execution_time:.3f}s: {str(e)}")
            raise
    return wrapper


def derive_key(seed: int, *parts: Any) -> int:
    """Derive a 128-bit key from a seed and record identifiers.

    Parts are joined with a unit separator so ("a", "bc") and ("ab", "c")
    produce different keys.
    """
    material = '\x1f'.join([str(int(seed))] + [str(part) for part in parts])
    digest = hashlib.sha256(material.encode('utf-8')).digest()
    return int.from_bytes(digest[:16], 'big')


def keyed_generator(seed: int, *parts: Any) -> np.random.Generator:
    """Counter-based generator keyed on (seed, parts).

    Uses numpy's Philox bit generator, so a record's draws depend only on its
    key and never on how many records were processed before it.
    """
    return np.random.Generator(np.random.Philox(key=derive_key(seed, *parts)))


def stable_hash(value: str) -> str:
    """Hex sha1 of a string; stable across processes and platforms."""
    return hashlib.sha1(value.encode('utf-8')).hexdigest()


def ordered_map(func: Callable[[T], R], items: Iterable[T], jobs: int = 1,
                chunksize: int = 64) -> List[R]:
    """Map func over items, preserving input order.

    With jobs > 1 the work fans out over a process pool; results are always
    reassembled in input order, so output never depends on scheduling.
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    workers = min(jobs, len(items))
    logger.debug(f"Fanning out {len(items)} items over {workers} workers")
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items, chunksize=chunksize))
