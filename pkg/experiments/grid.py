"""
Concurrent evaluation of experiment grid points.
"""

import logging
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any, Callable, Dict, Hashable, Sequence

from tqdm import tqdm

logger = logging.getLogger(__name__)


def run_grid(
    points: Sequence[Hashable],
    task: Callable[[Any], Any],
    threads: int = 1,
    desc: str = "Grid",
) -> Dict[Hashable, Any]:
    """Evaluate ``task(point)`` for every point; results keyed by point.

    Exceptions are logged with the failing point and re-raised after the
    remaining futures finish.
    """
    results: Dict[Hashable, Any] = {}
    failures = []

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        futures = {executor.submit(task, point): point for point in points}

        with tqdm(
            total=len(futures), desc=desc, disable=not sys.stderr.isatty()
        ) as pbar:
            for future in as_completed(futures):
                point = futures[future]
                try:
                    results[point] = future.result()
                    pbar.set_postfix({"current": str(point), "status": "OK"})
                except Exception as e:
                    logger.error(f"Error in {desc} at {point}: {str(e)}")
                    failures.append(e)
                    pbar.set_postfix({"current": str(point), "status": "ERROR"})
                pbar.update(1)

    if failures:
        raise failures[0]

    logger.info(f"{desc}: {len(results)} grid points completed")
    return results
