"""
Evaluation module initialization.

This module runs the classification and link-prediction protocols on
learned representations.
"""

from evaluation.classifier import SoftmaxClassifier, train_softmax_classifier
from evaluation.metrics import accuracy, roc_auc
from evaluation.reports import EvalReport, SettingResult
from evaluation.services import (
    LinkSplit,
    bow_baseline,
    classification_protocol,
    link_prediction_experiment,
    link_prediction_protocol,
    link_prediction_split,
    stratified_split,
    unseen_document_protocol,
    unseen_link_prediction_experiment,
)

__all__ = [
    'EvalReport', 'LinkSplit', 'SettingResult', 'SoftmaxClassifier', 'accuracy', 'bow_baseline',
    'classification_protocol', 'link_prediction_experiment', 'link_prediction_protocol',
    'link_prediction_split', 'roc_auc', 'stratified_split', 'train_softmax_classifier',
    'unseen_document_protocol', 'unseen_link_prediction_experiment',
]
