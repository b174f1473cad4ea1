"""Utility functions: JSON persistence of reports and ordered parallel mapping."""

import concurrent.futures
import json
import os
from datetime import datetime
from typing import Any, Callable, Dict, Iterable, List, Optional, TypeVar

import sympy

T = TypeVar("T")
R = TypeVar("R")


def save_report(report: Dict[str, Any], filename: Optional[str] = None,
                results_dir: str = "reports") -> str:
    """Save a report dictionary to a JSON file.

    Args:
        report: Report dictionary (e.g. ``ReportDocument.to_dict()``)
        filename: Optional filename, if not provided will use a timestamp
        results_dir: Directory to write into (created if missing)

    Returns:
        Path to saved file
    """
    if filename is None:
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        command = str(report.get('command', 'report')).replace(' ', '_')
        filename = f"report_{command}_{timestamp}.json"

    os.makedirs(results_dir, exist_ok=True)
    filepath = os.path.join(results_dir, filename)

    with open(filepath, 'w') as f:
        json.dump(make_serializable(report), f, indent=2, sort_keys=False)

    return filepath


def load_report(filepath: str) -> Dict[str, Any]:
    with open(filepath, 'r') as f:
        return json.load(f)


def make_serializable(obj: Any) -> Any:
    """Convert objects to JSON-serializable format.

    Args:
        obj: Object to convert

    Returns:
        Serializable version of the object
    """
    if isinstance(obj, sympy.Basic):
        return str(obj)
    if hasattr(obj, 'to_dict'):
        return make_serializable(obj.to_dict())
    if hasattr(obj, '__dict__'):
        return {k: make_serializable(v) for k, v in obj.__dict__.items() if not k.startswith('_')}
    elif isinstance(obj, dict):
        return {str(k): make_serializable(v) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [make_serializable(item) for item in obj]
    elif isinstance(obj, (str, int, float, bool, type(None))):
        return obj
    else:
        return str(obj)


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """Apply ``fn`` to every item, in a thread pool when ``workers > 1``.

    Results come back in input order whatever the completion order.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
