"""Exception hierarchy shared by every module."""


class ModcompError(Exception):
    """Base class for all errors raised by the package."""


class FormulaError(ModcompError):
    """Malformed concrete syntax or a signature violation.

    ``offset`` is the UTF-8 byte offset of the offending token when known.
    """

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


class ParseError(FormulaError):
    pass


class SignatureError(FormulaError):
    pass


class EvaluationError(ModcompError):
    pass


class MorleyizationError(ModcompError):
    pass


class GuardExceeded(ModcompError):
    """A configured cost guard would be exceeded."""


class TemplateCapExceeded(GuardExceeded):
    """Template enumeration hit its cap; the answer is unknown within bounds."""


class InvalidCode(ModcompError):
    pass


class TranslationError(ModcompError):
    pass
