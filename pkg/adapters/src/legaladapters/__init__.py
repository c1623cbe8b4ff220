"""Adapters that run text models and emit the legaltopics file formats.

The toolkit consumes embeddings as EMB1 files and entity annotations as
span JSONL; these adapters produce both. The default backend is a
deterministic offline encoder (feature hashing) plus a rule/lexicon NER,
so the pipeline runs end to end with no model downloads; a transformer
model id can be supplied where a hub is reachable.
"""

__version__ = "0.1.0"
