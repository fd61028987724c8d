"""
Caption Keyword Filter
Whole-token caption matching for collecting clock and watch images.
"""

import logging
import re
from typing import Iterable, List, Optional, Tuple

from ticktock.models.quality import FilterDecision, FilterReason, FilterResult

logger = logging.getLogger(__name__)

DEFAULT_ALLOWLIST = frozenset({'watch', 'watches', 'clock', 'clocks'})
DEFAULT_STEMS = ('watch', 'clock')

_TOKEN_SPLIT = re.compile(r'[\W_]+')


class CaptionFilter:
    """Keeps captions carrying an allowlisted token as a whole word."""

    def __init__(self, allowlist: Optional[Iterable[str]] = None, stems: Iterable[str] = DEFAULT_STEMS):
        self.allowlist = frozenset(token.lower() for token in (allowlist or DEFAULT_ALLOWLIST))
        self.stems = tuple(stem.lower() for stem in stems)
        logger.info(f"Caption filter initialized with allowlist {sorted(self.allowlist)}")

    def tokens(self, caption: str) -> List[str]:
        return [token for token in _TOKEN_SPLIT.split(caption.lower()) if token]

    def check(self, caption: str) -> FilterDecision:
        excluded = None
        for token in self.tokens(caption):
            if token in self.allowlist:
                return FilterDecision(FilterResult.KEEP, FilterReason.KEYWORD, token)
            if excluded is None and any(stem in token for stem in self.stems):
                excluded = token
        if excluded is not None:
            return FilterDecision(FilterResult.DROP, FilterReason.EXCLUDED_INFLECTION, excluded)
        return FilterDecision(FilterResult.DROP, FilterReason.NO_KEYWORD)

    def filter_captions(self, captions: Iterable[Tuple[str, str]]) -> List[Tuple[str, FilterDecision]]:
        decisions = [(record_id, self.check(caption)) for record_id, caption in captions]
        kept = sum(1 for _, decision in decisions if decision.keep)
        logger.info(f"Caption filter kept {kept} of {len(decisions)} captions")
        return decisions


_default_filter: Optional[CaptionFilter] = None


def keyword_filter(caption: str, allowlist: Optional[Iterable[str]] = None) -> FilterDecision:
    global _default_filter
    if allowlist is not None:
        return CaptionFilter(allowlist).check(caption)
    if _default_filter is None:
        _default_filter = CaptionFilter()
    return _default_filter.check(caption)
