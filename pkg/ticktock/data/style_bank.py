"""
Default Style Vocabulary
Visual styles, materials and lighting used to compose text prompts for
edge-conditioned clock synthesis.
"""

from typing import Dict, List

VISUAL_STYLES: List[str] = [
    "minimalist modern",
    "classic vintage",
    "industrial artistic",
    "ornate baroque",
    "scandinavian",
    "art deco",
]

MATERIALS: List[str] = [
    "polished dark wood",
    "brushed aluminum",
    "matte black steel",
    "aged brass",
    "white ceramic",
    "frosted glass",
]

LIGHTING: List[str] = [
    "dramatic shadows",
    "bright airy aesthetic",
    "soft window light",
    "warm evening glow",
    "studio lighting",
]

SETTINGS: List[str] = [
    "on a living room wall",
    "in a train station",
    "on an office desk",
    "on a brick facade",
    "in a cafe",
]

PROMPT_TEMPLATE = "a {style} analog clock made of {material}, {setting}, {lighting}, photorealistic"


def get_style_vocabulary() -> Dict[str, List[str]]:
    """Get every prompt axis with its options."""
    return {
        'style': list(VISUAL_STYLES),
        'material': list(MATERIALS),
        'setting': list(SETTINGS),
        'lighting': list(LIGHTING),
    }
