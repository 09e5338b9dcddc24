"""
Run configuration forms using WTForms.

Values come from the merged app config and command-line flags instead of a
request, so the plain ``wtforms.Form`` is fed through ``data=``.
"""

from wtforms import BooleanField, FloatField, Form, IntegerField, StringField
from wtforms.validators import AnyOf, NumberRange, ValidationError

from gvnr_core.optim import OPTIMIZERS
from gvnr_core.services import GvnrConfig
from pipeline.services import MODES_BY_VARIANT, VARIANTS, RunConfig
from walk_cooc.services import WalkConfig


# Keys of the Flask config consumed by RunConfigForm.
RUN_CONFIG_KEYS = (
    'VARIANT', 'MODE', 'DIM', 'K', 'X_MIN', 'EPOCHS', 'LEARNING_RATE', 'OPTIMIZER', 'BATCH_SIZE',
    'ZERO_TARGET', 'WALKS_PER_NODE', 'WALK_LENGTH', 'WINDOW', 'WINDOW_DECAY', 'SEED', 'THREADS',
)


def mode_matches_variant(form, field):
    """The representation mode must exist for the chosen variant."""
    if field.data in (None, ''):
        return
    modes = MODES_BY_VARIANT.get(form.variant.data, ())
    if field.data not in modes:
        raise ValidationError(f"Mode '{field.data}' is not available for {form.variant.data}; use one of {', '.join(modes)}.")


def positive(form, field):
    """Strictly positive number."""
    if field.data is None or not field.data > 0:
        raise ValidationError(f'{field.label.text} must be positive.')


def window_below_walk_length(form, field):
    """A window must fit inside a walk."""
    if field.data is not None and form.walk_length.data is not None and field.data >= form.walk_length.data:
        raise ValidationError('Window must be smaller than the walk length.')


class RunConfigForm(Form):
    """Form validating walk and training settings."""

    variant = StringField('Variant', validators=[
        AnyOf(VARIANTS, message='Variant must be one of %(values)s.')
    ])

    mode = StringField('Mode', validators=[mode_matches_variant])

    dim = IntegerField('Dimension', validators=[
        NumberRange(min=1, message='Dimension must be at least 1.')
    ])

    k = IntegerField('Zero oversampling', validators=[
        NumberRange(min=1, message='k must be at least 1.')
    ])

    x_min = FloatField('Minimum count', validators=[
        NumberRange(min=0, message='x_min must be nonnegative.')
    ])

    epochs = IntegerField('Epochs', validators=[
        NumberRange(min=1, message='Epochs must be at least 1.')
    ])

    learning_rate = FloatField('Learning rate', validators=[
        positive
    ])

    optimizer = StringField('Optimizer', validators=[
        AnyOf(tuple(OPTIMIZERS), message='Optimizer must be one of %(values)s.')
    ])

    batch_size = IntegerField('Batch size', validators=[
        NumberRange(min=1, message='Batch size must be at least 1.')
    ])

    zero_target = FloatField('Zero target', validators=[
        NumberRange(message='Zero target is required.')
    ])

    walks_per_node = IntegerField('Walks per node', validators=[
        NumberRange(min=1, message='Walks per node must be at least 1.')
    ])

    walk_length = IntegerField('Walk length', validators=[
        NumberRange(min=2, message='Walk length must be at least 2.')
    ])

    window = IntegerField('Window', validators=[
        NumberRange(min=1, message='Window must be at least 1.'),
        window_below_walk_length,
    ])

    window_decay = BooleanField('Window decay')

    seed = IntegerField('Seed', validators=[
        NumberRange(min=0, max=2 ** 64 - 1, message='Seed must be an unsigned 64-bit integer.')
    ])

    threads = IntegerField('Threads', validators=[
        NumberRange(min=1, message='Threads must be at least 1.')
    ])

    def to_run_config(self):
        """Build the frozen RunConfig from validated data."""
        walk = WalkConfig(
            walks_per_node=self.walks_per_node.data,
            walk_length=self.walk_length.data,
            window=self.window.data,
            seed=self.seed.data,
            window_decay=bool(self.window_decay.data),
            threads=self.threads.data,
        )
        mode = self.mode.data or None
        gvnr = GvnrConfig(
            dim=self.dim.data,
            k=self.k.data,
            epochs=self.epochs.data,
            learning_rate=self.learning_rate.data,
            x_min=self.x_min.data,
            seed=self.seed.data,
            representation_mode=mode if self.variant.data == 'gvnr' and mode else 'concat',
            optimizer=self.optimizer.data,
            batch_size=self.batch_size.data,
            zero_target=self.zero_target.data,
            threads=self.threads.data,
        )
        return RunConfig(walk=walk, gvnr=gvnr, variant=self.variant.data, mode=mode)


def form_data(config, keys):
    """Lower-cased form data for the given uppercase config keys."""
    return {key.lower(): config.get(key) for key in keys}
