"""
Bundled Prompt Assets
Verbatim training and inference prompts shipped with the toolkit.
"""

from importlib import resources

from ticktock.models.preference import PromptCorpus

TRAINING_PROMPT_FILES = ('training_a.txt', 'training_b.txt', 'training_c.txt')
INFERENCE_PROMPT_FILE = 'inference.txt'


def read_prompt_asset(name: str) -> str:
    """Read one prompt file; the trailing newline is not part of the prompt."""
    text = resources.files(__name__).joinpath('prompts', name).read_text(encoding='utf-8')
    return text.rstrip('\n')


def get_default_prompt_corpus() -> PromptCorpus:
    """Get the bundled prompt corpus."""
    return PromptCorpus(
        training_prompts=tuple(read_prompt_asset(name) for name in TRAINING_PROMPT_FILES),
        inference_prompt=read_prompt_asset(INFERENCE_PROMPT_FILE),
    )

