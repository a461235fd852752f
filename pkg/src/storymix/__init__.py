"""storymix: a multi-track audio story production engine.

Turns a text prompt into a mixed audio narrative via identity-aware voice
casting, quality-gated synthesis loops, sample-accurate timeline mixing and
natural-language interactive refinement. All generative and critic models sit
behind a pluggable backend gateway with deterministic mocks included.
"""

__version__ = "0.1.0"
