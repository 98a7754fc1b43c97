"""Shared record of acceptance verdicts, printed at the end of the run."""

import functools
import time

RESULTS = {}


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                RESULTS[number] = (False, title, f"{type(exc).__name__}: {exc}".splitlines()[0])
                print(f"criterion {number}: FAIL  {title}")
                raise
            took = time.perf_counter() - start
            line = f"{detail}; {took:.1f}s" if detail else f"{took:.1f}s"
            RESULTS[number] = (True, title, line)
            print(f"criterion {number}: PASS  {title} ({line})")
        return run
    return wrap
