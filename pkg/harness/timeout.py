from functools import wraps
from queue import Empty, Queue
from threading import Thread


def _run_into(outcome: Queue, func, args, kwargs) -> None:
    try:
        outcome.put((True, func(*args, **kwargs)))
    except BaseException as e:
        outcome.put((False, e))


def timeout(sec=60):
    """Fail a test that runs longer than ``sec`` seconds.

    The test body runs on a daemon thread. A thread that overruns cannot be
    killed; it is left behind and does not hold up interpreter exit.
    """
    def timeout_dec(func):
        @wraps(func)
        def test(*args, **kwargs):
            outcome = Queue(maxsize=1)
            worker = Thread(target=_run_into, args=(outcome, func, args, kwargs), daemon=True)
            worker.start()
            worker.join(sec)
            if worker.is_alive():
                raise TimeoutError(f"Timed out after {sec} seconds")
            try:
                finished, value = outcome.get_nowait()
            except Empty:
                raise RuntimeError("test thread ended without a result") from None
            if not finished:
                raise value
            return value
        return test
    return timeout_dec
