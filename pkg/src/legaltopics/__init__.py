"""Corpus-to-topics toolkit for legal document extraction files.

Submodules: corpus parsing and filtering (``corpus``), span masking
(``anonymize``), detection and OCR metrics (``eval_detect``, ``eval_text``),
embedding persistence (``embed_store``), dimensionality reduction
(``reduce``), density clustering (``cluster``), topic words (``topic_rep``),
topic metrics (``topic_eval``), generation scoring (``gen_eval``), LLM
prompting (``interpret``), and the CLI (``cli``).
"""

from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"
__all__ = ["KERNEL_BACKEND", "__version__"]
