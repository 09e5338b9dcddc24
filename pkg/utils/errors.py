"""
Exception types raised by the embedding pipeline.

Commands turn these into readable click errors (see utils.decorators).
"""


class GvnrError(Exception):
    """Base class for every error raised on purpose by this package."""


class DatasetFormatError(GvnrError):
    """A content or cites file could not be parsed."""

    def __init__(self, message, line_number=None, source=None):
        self.line_number = line_number
        self.source = source
        where = ''
        if source is not None:
            where += f'{source}'
        if line_number is not None:
            where += f'{":" if where else "line "}{line_number}'
        super().__init__(f'{where}: {message}' if where else message)


class EmptyInputError(GvnrError):
    """An operation received an empty dataset, walk set, document or score list."""


class InvalidParameterError(GvnrError):
    """A configuration value or argument is outside its valid range."""


class TrainingDivergedError(GvnrError):
    """The training loss became non-finite."""

    def __init__(self, epoch, batch, last_finite_loss, learning_rate):
        self.epoch = epoch
        self.batch = batch
        self.last_finite_loss = last_finite_loss
        self.learning_rate = learning_rate
        super().__init__(
            f'non-finite loss at epoch {epoch}, batch {batch} '
            f'(last finite epoch loss: {last_finite_loss}, learning rate {learning_rate}); '
            'try a lower learning rate'
        )


class InferenceError(GvnrError):
    """A document or node cannot be embedded with the fitted model."""
