"""Runs a suite and writes one JSON document describing every test."""
import inspect
import json
import sys
import time
from unittest import result
from unittest.signals import registerResult

import harness.decorators as decorators

DECORATOR_CLASSES = [
    klass for _name, klass in inspect.getmembers(decorators)
    if (
        inspect.isclass(klass)
        and issubclass(klass, decorators.Decorator)
        and klass != decorators.Decorator
    )
]


class JSONTestResult(result.TestResult):
    """Collects one dict per test: name, ok, section, slow, seconds and,
    for failures, the error message."""

    def __init__(self, stream, descriptions, verbosity, results):
        super().__init__(stream, descriptions, verbosity)
        self.descriptions = descriptions
        self.results = results
        self._started = None

    def getDescription(self, test):
        doc_first_line = test.shortDescription()
        if self.descriptions and doc_first_line:
            return doc_first_line
        return str(test)

    def startTest(self, test):
        self._started = time.perf_counter()
        super().startTest(test)

    def buildResult(self, test, err=None):
        elapsed = time.perf_counter() - self._started if self._started is not None else 0.0
        record = {
            "name": self.getDescription(test),
            "ok": err is None,
            "seconds": round(elapsed, 3),
        }
        method = getattr(test, test._testMethodName)
        for dec in DECORATOR_CLASSES:
            dec.change_result(dec.value_of(method), record, err)
        if err is not None:
            record["error"] = "{}: {}".format(err[0].__name__, err[1])
        return record

    def processResult(self, test, err=None):
        self.results.append(self.buildResult(test, err))

    def addSuccess(self, test):
        super().addSuccess(test)
        self.processResult(test)

    def addError(self, test, err):
        super().addError(test, err)
        self._mirrorOutput = False
        self.processResult(test, err)

    def addFailure(self, test, err):
        super().addFailure(test, err)
        self._mirrorOutput = False
        self.processResult(test, err)


class JSONTestRunner:
    resultclass = JSONTestResult

    def __init__(self, stream=sys.stdout, descriptions=True, verbosity=1, failfast=False, buffer=True):
        self.stream = stream
        self.descriptions = descriptions
        self.verbosity = verbosity
        self.failfast = failfast
        self.buffer = buffer
        self.json_data = {"testcases": []}

    def _makeResult(self):
        return self.resultclass(self.stream, self.descriptions, self.verbosity, self.json_data["testcases"])

    def run(self, test):
        "Run the given test case or test suite."
        outcome = self._makeResult()
        registerResult(outcome)
        outcome.failfast = self.failfast
        outcome.buffer = self.buffer
        outcome.startTestRun()
        try:
            test(outcome)
        finally:
            outcome.stopTestRun()
        self.json_data["passed"] = sum(case["ok"] for case in self.json_data["testcases"])
        self.json_data["total"] = len(self.json_data["testcases"])
        json.dump(self.json_data, self.stream, indent=4)
        self.stream.write("\n")
        return outcome
