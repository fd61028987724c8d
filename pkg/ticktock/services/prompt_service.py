"""
Prompt Service
Keyed rotation over training prompts and text prompts for edge-conditioned synthesis.
"""

import logging
from pathlib import Path
from typing import List, Optional

from ticktock.data import INFERENCE_PROMPT_FILE, TRAINING_PROMPT_FILES, get_default_prompt_corpus
from ticktock.data.style_bank import PROMPT_TEMPLATE, get_style_vocabulary
from ticktock.models.preference import PromptCorpus
from ticktock.utils import keyed_generator

logger = logging.getLogger(__name__)

DEFAULT_PROMPT_SEED = 0


def rotate_prompt(corpus: PromptCorpus, record_key: str, rng_seed: int = DEFAULT_PROMPT_SEED) -> str:
    """Uniform, deterministic choice among the three training prompts."""
    index = int(keyed_generator(rng_seed, 'prompt', record_key).integers(len(corpus.training_prompts)))
    return corpus.training_prompts[index]


def compose_style_prompt(seed: int, index: int) -> str:
    """Text prompt for one sample, drawn per axis from the style vocabulary."""
    rng = keyed_generator(seed, 'style-prompt', index)
    choices = {axis: options[int(rng.integers(len(options)))]
               for axis, options in get_style_vocabulary().items()}
    return PROMPT_TEMPLATE.format(**choices)


class PromptService:
    """Loads the prompt corpus and writes it out as asset files."""

    def __init__(self, corpus: Optional[PromptCorpus] = None):
        self.corpus = corpus or get_default_prompt_corpus()
        logger.info("Prompt service initialized")

    def prompt_for(self, record_key: str, rng_seed: int = DEFAULT_PROMPT_SEED) -> str:
        return rotate_prompt(self.corpus, record_key, rng_seed)

    @property
    def inference_prompt(self) -> str:
        return self.corpus.inference_prompt

    def emit(self, session) -> List[Path]:
        """Write every prompt verbatim through an output session."""
        names = TRAINING_PROMPT_FILES + (INFERENCE_PROMPT_FILE,)
        texts = tuple(self.corpus.training_prompts) + (self.corpus.inference_prompt,)
        written = [session.write_text(name, text + '\n') for name, text in zip(names, texts)]
        logger.info(f"Wrote {len(written)} prompt assets")
        return written
