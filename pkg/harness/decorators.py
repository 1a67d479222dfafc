import abc


class InvalidValueException(Exception):
    pass


class Decorator(abc.ABC):
    """
    Tags a test method with a value, read back by the runners through
    ``get_attr_name``.
    """

    def __init__(self, v) -> None:
        res = self.validate(v)
        if res:
            raise InvalidValueException(res)
        self.v = v

    def validate(self, v):
        return None

    def __call__(self, func):
        setattr(func, self.get_attr_name(), self.v)
        return func

    @classmethod
    def get_attr_name(cls):
        return f"__{cls.__name__}__"

    @classmethod
    def value_of(cls, func):
        return getattr(func, cls.get_attr_name(), None)

    @classmethod
    @abc.abstractmethod
    def change_result(cls, saved_value, results: dict, err):
        """
        Record the decorator on a JSON result.
        Called for every test; saved_value is None when the decorator is absent.
        """


class number(Decorator):
    """Section number such as "3.4"; run_tests.py filters on its prefix."""

    def validate(self, v):
        if not isinstance(v, str) or not all(part.isdigit() for part in v.split(".")):
            return "Number should look like '3.4'."

    @classmethod
    def change_result(cls, saved_value, results: dict, err):
        if saved_value is not None:
            results["name"] = "{}: {}".format(saved_value, results["name"])
            results["section"] = saved_value.split(".")[0]


class slow(Decorator):
    """Long-running test, only run with ``run_tests.py --slow``."""

    def __init__(self) -> None:
        self.v = True

    @classmethod
    def change_result(cls, saved_value, results: dict, err):
        results["slow"] = saved_value is True
