"""Prompt construction and chat-completion calls for topic labels and
summaries.

The two default templates are the toolkit's Italian prompts; placeholders
[KEYWORDS] and [REPR_DOCS] are filled from the fitted topic model. Requests
go to a configurable chat-completion endpoint; anonymized text only should
ever be supplied as representative documents.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field

import requests

LABEL_TEMPLATE = """Sei un esperto di giurisprudenza e di diritto italiano.
Rispondi in modo professionale alle richieste.
Ho un topic descritto dalle seguenti keywords: [KEYWORDS]
In questo topic, i seguenti documenti sono un sottoinsieme piccolo ma rappresentativo di tutti i documenti dell'argomento: [REPR_DOCS].
Sulla base delle informazioni di cui sopra, fornisci una breve label a questo topic.
Assicurati di riportare solo la label e nient'altro."""

SUMMARY_TEMPLATE = """Sei un esperto di giurisprudenza e di diritto italiano.
Rispondi in modo professionale alle richieste.
Ho un topic descritto dalle seguenti keywords: [KEYWORDS]
In questo topic, i seguenti documenti sono un sottoinsieme piccolo ma rappresentativo di tutti i documenti dell'argomento: [REPR_DOCS].
Sulla base delle informazioni di cui sopra, fornisci una descrizione di questo topic nel seguente formato:
topic: <descrizione>"""

MAX_DOC_CHARS = 2000
LABEL_MAX_CHARS = 120

# per-task generation defaults (local 8B-class model settings)
LABEL_PARAMS = dict(max_new_tokens=50, temperature=0.1, repetition_penalty=1.1)
SUMMARY_PARAMS = dict(max_new_tokens=2048, temperature=0.1,
                      repetition_penalty=1.1)


class InterpretError(RuntimeError):
    pass


@dataclass(frozen=True)
class GenerationParams:
    max_new_tokens: int
    temperature: float
    repetition_penalty: float

    def __post_init__(self):
        if self.max_new_tokens < 1:
            raise ValueError("max_new_tokens must be >= 1")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class PromptTask:
    kind: str  # "label" or "summary"
    template: str = ""

    def __post_init__(self):
        if self.kind not in ("label", "summary"):
            raise ValueError(f"unknown task kind {self.kind!r}")
        if not self.template:
            object.__setattr__(
                self, "template",
                LABEL_TEMPLATE if self.kind == "label" else SUMMARY_TEMPLATE)
        for placeholder in ("[KEYWORDS]", "[REPR_DOCS]"):
            if self.template.count(placeholder) != 1:
                raise ValueError(
                    f"template must contain {placeholder} exactly once")

    def default_params(self) -> GenerationParams:
        return GenerationParams(**(LABEL_PARAMS if self.kind == "label"
                                   else SUMMARY_PARAMS))


@dataclass
class ProviderConfig:
    name: str
    endpoint: str
    model: str
    headers: dict[str, str] = field(default_factory=dict)
    timeout: float = 120.0
    retries: int = 3
    backoff: float = 1.0
    send_sampling_params: bool = True


def render_prompt(task: PromptTask, keywords, repr_docs) -> str:
    """Fill both placeholders; keywords joined with ", ", docs newline-joined
    with a "- " prefix and truncated to 2,000 characters each."""
    keywords = list(keywords)
    repr_docs = list(repr_docs)
    if not keywords:
        raise InterpretError("need at least one keyword")
    if not repr_docs:
        raise InterpretError("need at least one representative document")
    docs = "\n".join("- " + d[:MAX_DOC_CHARS] for d in repr_docs)
    out = task.template.replace("[KEYWORDS]", ", ".join(keywords))
    out = out.replace("[REPR_DOCS]", docs)
    return out


def request_completion(provider: ProviderConfig, prompt: str,
                       params: GenerationParams) -> str:
    """Single-turn chat completion with exponential-backoff retries."""
    body = {"model": provider.model,
            "messages": [{"role": "user", "content": prompt}]}
    if provider.send_sampling_params:
        body.update(max_tokens=params.max_new_tokens,
                    temperature=params.temperature,
                    repetition_penalty=params.repetition_penalty)
    last_error = None
    for attempt in range(provider.retries):
        if attempt:
            time.sleep(provider.backoff * 2 ** (attempt - 1))
        try:
            resp = requests.post(provider.endpoint, json=body,
                                 headers=provider.headers,
                                 timeout=provider.timeout)
        except requests.RequestException as exc:
            last_error = f"request failed: {exc}"
            continue
        if resp.status_code // 100 != 2:
            last_error = f"HTTP {resp.status_code}: {resp.text[:200]}"
            continue
        try:
            text = resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError):
            last_error = f"unexpected response body: {resp.text[:200]}"
            continue
        if not text:
            last_error = "empty completion"
            continue
        return text
    raise InterpretError(
        f"{provider.name}: no completion after {provider.retries} attempts "
        f"({last_error})")


def parse_label(raw: str) -> tuple[str, bool]:
    """First non-empty line, trimmed, quotes stripped.

    Returns (label, conforming); over-long output is flagged nonconforming
    (models sometimes answer the label task with a full summary)."""
    if not raw.strip():
        raise InterpretError("empty completion")
    line = next(l.strip() for l in raw.splitlines() if l.strip())
    line = line.strip("\"'“”«»")
    return line, len(line) <= LABEL_MAX_CHARS


def parse_summary(raw: str) -> tuple[str, bool]:
    """Text after the first "topic:" marker; whole text flagged
    nonconforming when the marker is missing."""
    if not raw.strip():
        raise InterpretError("empty completion")
    lowered = raw.lower()
    marker = lowered.find("topic:")
    if marker < 0:
        return raw.strip(), False
    return raw[marker + len("topic:"):].strip().strip("$<>").strip(), True


def prompt_sha256(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


def interpret_topics(model, provider: ProviderConfig, task: PromptTask,
                     repr_texts: dict[int, list[str]],
                     params: GenerationParams | None = None):
    """Run one task over every topic; yields result records.

    ``repr_texts`` maps topic_id to the anonymized texts of its
    representative segments."""
    params = params or task.default_params()
    parse = parse_label if task.kind == "label" else parse_summary
    for topic in model.topics:
        keywords = [t for t, _ in topic.words]
        prompt = render_prompt(task, keywords, repr_texts[topic.topic_id])
        raw = request_completion(provider, prompt, params)
        output, conforming = parse(raw)
        yield {"provider": provider.name, "task": task.kind,
               "topic_id": topic.topic_id, "prompt_sha256": prompt_sha256(prompt),
               "output": output, "conforming": conforming}


def write_results(records, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")
