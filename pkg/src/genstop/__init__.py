"""genstop: excess-token detection and early stopping for code-LLM decoding.

The pipeline: label raw generations into expected/excess token data
(genstop.labeling), train a lightweight stop classifier over hidden states
(genstop.classifier), and gate decoding with a line-voting controller
(genstop.controller) -- replayable offline (genstop.simulate) or live over
the stdio step protocol (genstop.serve).
"""

__version__ = "0.1.0"
