from ticktock.models.annotation import AnnotationRecord, PredictionRecord
from ticktock.models.clock import ClockTime, HandAngles, ParsedAnswer

__all__ = ['AnnotationRecord', 'PredictionRecord', 'ClockTime', 'HandAngles', 'ParsedAnswer']
