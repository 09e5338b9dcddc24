"""
Evaluation reports: per-setting mean/stddev over seeded repeats, emitted as
JSON or as a plain-text table with settings as columns.
"""

import json
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SettingResult:
    """Metric values of every repeat for one setting (e.g. a training fraction)."""

    setting: float
    values: tuple

    @property
    def repeats(self):
        return len(self.values)

    @property
    def mean(self):
        return float(np.mean(self.values))

    @property
    def std(self):
        return float(np.std(self.values))

    def to_dict(self):
        return {
            'setting': self.setting,
            'mean': self.mean,
            'std': self.std,
            'repeats': self.repeats,
            'values': [float(v) for v in self.values],
        }


@dataclass(frozen=True)
class EvalReport:
    """
    Result of one evaluation protocol.

    Attributes:
        protocol (str): classification, unseen_documents, link_prediction, ...
        metric (str): 'accuracy' or 'auc'.
        method (str): Row label in the table (e.g. GVNR-t).
        settings (tuple[SettingResult]): One entry per fraction.
        config (dict): Seeds, dimensions, mode and other settings echoed back.
    """

    protocol: str
    metric: str
    method: str
    settings: tuple
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        for result in self.settings:
            if result.repeats < 1:
                raise ValueError('every setting needs at least one repeat')
            if not all(0.0 <= v <= 1.0 for v in result.values):
                raise ValueError(f'{self.metric} values must lie in [0, 1]')

    def setting(self, value):
        """Return the SettingResult for a fraction."""
        for result in self.settings:
            if np.isclose(result.setting, value):
                return result
        raise KeyError(value)

    def to_dict(self):
        return {
            'protocol': self.protocol,
            'metric': self.metric,
            'method': self.method,
            'settings': [result.to_dict() for result in self.settings],
            'config': self.config,
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent, sort_keys=False, default=_json_default)

    def to_table(self):
        """
        Aligned text table: one column per setting, one row for the method.

        Accuracies print as percentages with one decimal, AUC with three.
        """
        header_label = {
            'classification': '% of training data',
            'bow_baseline': '% of training data',
            'unseen_documents': '% of observed nodes',
            'link_prediction': '% of test edges',
            'unseen_link_prediction': '% of hidden nodes',
        }.get(self.protocol, 'setting')
        columns = [f'{round(result.setting * 100):d}%' for result in self.settings]
        if self.metric == 'accuracy':
            cells = [f'{result.mean * 100:.1f}' for result in self.settings]
            spread = [f'±{result.std * 100:.1f}' for result in self.settings]
        else:
            cells = [f'{result.mean:.3f}' for result in self.settings]
            spread = [f'±{result.std:.3f}' for result in self.settings]

        first = max(len(header_label), len(self.method), len('(std)'))
        width = max([len(c) for c in columns + cells + spread] + [6])
        lines = [
            header_label.ljust(first) + ' | ' + ' '.join(c.rjust(width) for c in columns),
            '-' * (first + 3 + (width + 1) * len(columns) - 1),
            self.method.ljust(first) + ' | ' + ' '.join(c.rjust(width) for c in cells),
            '(std)'.ljust(first) + ' | ' + ' '.join(c.rjust(width) for c in spread),
        ]
        return '\n'.join(lines) + '\n'


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f'cannot serialize {type(value).__name__}')
