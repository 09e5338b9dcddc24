"""
Evaluation settings forms using WTForms.
"""

from wtforms import FloatField, Form, IntegerField, StringField
from wtforms.validators import AnyOf, NumberRange, ValidationError

from evaluation.services import SCORERS
from utils.errors import InvalidParameterError
from utils.helpers import parse_fractions


def fraction_list(form, field):
    """A ``0.1..0.5`` range or comma list of fractions strictly inside (0, 1)."""
    if field.data is None:
        return
    try:
        values = parse_fractions(field.data or '')
    except InvalidParameterError as e:
        raise ValidationError(str(e)) from e
    for value in values:
        if not 0.0 < value < 1.0:
            raise ValidationError(f'Fraction {value} must lie strictly between 0 and 1.')


class EvaluationForm(Form):
    """Form validating protocol settings shared by the evaluate commands."""

    fractions = StringField('Fractions', validators=[fraction_list])

    repeats = IntegerField('Repeats', validators=[
        NumberRange(min=1, message='Repeats must be at least 1.')
    ])

    l2 = FloatField('L2 regularization', validators=[
        NumberRange(min=0, message='L2 regularization must be nonnegative.')
    ])

    test_frac = FloatField('Held-out fraction', validators=[
        NumberRange(min=0.0, max=1.0, message='Held-out fraction must lie between 0 and 1.')
    ])

    scorer = StringField('Scorer', validators=[
        AnyOf(SCORERS, message='Scorer must be one of %(values)s.')
    ])

    def fraction_values(self):
        return parse_fractions(self.fractions.data)
