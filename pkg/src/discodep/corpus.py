"""SciDTB-format corpus loading, validation, vocabularies, serialization.

Each document is one JSON file whose top-level object wraps an array of EDU
records (wrapper key ``"root"`` in SciDTB) with fields ``text``, ``parent``
and ``relation``.  Position 0 is the artificial ROOT symbol with parent -1.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable, Sequence

from discodep.errors import CorpusError, TreeError
from discodep.trees import DepTree

ROOT_TEXT = "ROOT"
SPLITS = ("train", "dev", "test")

PAD, UNK, ROOT = "<pad>", "<unk>", "<root>"
PAD_ID, UNK_ID, ROOT_ID = 0, 1, 2
_RESERVED = (PAD, UNK, ROOT)

DOCS_DUMP_VERSION = "disco-docs/1"
VOCAB_VERSION = "disco-vocab/1"


@dataclass(frozen=True)
class Edu:
    """One elementary discourse unit; index 0 is the ROOT symbol."""

    index: int
    text: str
    gold_head: int
    gold_relation: str


@dataclass(frozen=True)
class Document:
    doc_id: str
    edus: tuple[Edu, ...]

    @property
    def n(self) -> int:
        """Number of real EDUs (ROOT excluded)."""
        return len(self.edus) - 1

    def gold_tree(self) -> DepTree:
        return DepTree(
            heads=tuple(e.gold_head for e in self.edus[1:]),
            labels=tuple(e.gold_relation for e in self.edus[1:]),
        )


@dataclass(frozen=True)
class Corpus:
    split: str
    documents: tuple[Document, ...]

    def __len__(self) -> int:
        return len(self.documents)


class TreebankTokenizer:
    """Penn-Treebank-style word tokenizer.

    A self-contained port of the classic treebank tokenization rules
    (punctuation splitting, bracket separation, quote normalization,
    English contraction splitting).  No lowercasing.
    """

    _STARTING_QUOTES = [
        (re.compile(r"^\""), r"``"),
        (re.compile(r"(``)"), r" \1 "),
        (re.compile(r"([ \(\[{<])(\"|\'{2})"), r"\1 `` "),
    ]
    _PUNCTUATION = [
        (re.compile(r"([:,])([^\d])"), r" \1 \2"),
        (re.compile(r"([:,])$"), r" \1 "),
        (re.compile(r"\.\.\."), r" ... "),
        (re.compile(r"[;@#$%&]"), r" \g<0> "),
        (re.compile(r"([^\.])(\.)([\]\)}>\"\']*)\s*$"), r"\1 \2\3 "),
        (re.compile(r"[?!]"), r" \g<0> "),
        (re.compile(r"([^'])' "), r"\1 ' "),
    ]
    _PARENS_BRACKETS = [
        (re.compile(r"[\]\[\(\)\{\}\<\>]"), r" \g<0> "),
        (re.compile(r"--"), r" -- "),
    ]
    _ENDING_QUOTES = [
        (re.compile(r"\""), " '' "),
        (re.compile(r"(\S)(\'\')"), r"\1 \2 "),
        (re.compile(r"([^' ])('[sS]|'[mM]|'[dD]|') "), r"\1 \2 "),
        (re.compile(r"([^' ])('ll|'LL|'re|'RE|'ve|'VE|n't|N'T) "), r"\1 \2 "),
    ]
    _CONTRACTIONS = [
        re.compile(pat)
        for pat in (
            r"(?i)\b(can)(not)\b",
            r"(?i)\b(d)('ye)\b",
            r"(?i)\b(gim)(me)\b",
            r"(?i)\b(gon)(na)\b",
            r"(?i)\b(got)(ta)\b",
            r"(?i)\b(lem)(me)\b",
            r"(?i)\b(mor)('n)\b",
            r"(?i)\b(wan)(na)\b",
            r"(?i) ('t)(is)\b",
            r"(?i) ('t)(was)\b",
        )
    ]

    def tokenize(self, text: str) -> list[str]:
        for rx, sub in self._STARTING_QUOTES:
            text = rx.sub(sub, text)
        for rx, sub in self._PUNCTUATION:
            text = rx.sub(sub, text)
        for rx, sub in self._PARENS_BRACKETS:
            text = rx.sub(sub, text)
        text = " " + text + " "
        for rx, sub in self._ENDING_QUOTES:
            text = rx.sub(sub, text)
        for rx in self._CONTRACTIONS:
            text = rx.sub(r" \1 \2 ", text)
        return text.split()

    def __call__(self, text: str) -> list[str]:
        return self.tokenize(text)


_DEFAULT_TOKENIZER = TreebankTokenizer()


def default_tokenizer() -> TreebankTokenizer:
    return _DEFAULT_TOKENIZER


@lru_cache(maxsize=4096)
def edu_words(text: str) -> tuple[str, ...]:
    """Tokenize one EDU's text with the default tokenizer (cached)."""
    return tuple(_DEFAULT_TOKENIZER.tokenize(text))


def load_document(data: bytes | str, doc_id: str = "<memory>", wrapper_key: str = "root") -> Document:
    """Parse one SciDTB JSON document and validate its tree structure.

    ``wrapper_key`` names the top-level array of EDU records (SciDTB uses
    ``"root"``).  Heads are taken verbatim from ``parent``.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as e:
        raise CorpusError(f"{doc_id}: malformed JSON at byte offset {e.pos}: {e.msg}") from e
    if not isinstance(obj, dict) or wrapper_key not in obj:
        raise CorpusError(f"{doc_id}: missing top-level {wrapper_key!r} array")
    records = obj[wrapper_key]
    if not isinstance(records, list) or not records:
        raise CorpusError(f"{doc_id}: {wrapper_key!r} must be a non-empty array")

    edus = []
    for i, rec in enumerate(records):
        try:
            text = str(rec["text"])
            head = int(rec["parent"])
            relation = str(rec["relation"])
        except (KeyError, TypeError, ValueError) as e:
            raise CorpusError(f"{doc_id}: EDU {i} lacks usable text/parent/relation: {e}") from e
        edus.append(Edu(index=i, text=text, gold_head=head, gold_relation=relation))

    n = len(edus) - 1
    if edus[0].gold_head != -1 or edus[0].text != ROOT_TEXT:
        raise CorpusError(f"{doc_id}: EDU 0 must be the {ROOT_TEXT!r} symbol with parent -1")
    for e in edus[1:]:
        if e.gold_head == -1:
            raise CorpusError(f"{doc_id}: EDU {e.index} is a second root (parent -1)")
        if e.gold_head == e.index:
            raise CorpusError(f"{doc_id}: EDU {e.index} is its own head")
        if not 0 <= e.gold_head <= n:
            raise CorpusError(f"{doc_id}: EDU {e.index} has head {e.gold_head} outside 0..{n}")
    doc = Document(doc_id=doc_id, edus=tuple(edus))
    if n > 0:
        try:
            doc.gold_tree()
        except TreeError as e:
            raise CorpusError(f"{doc_id}: {e}") from e
    else:
        raise CorpusError(f"{doc_id}: document has no EDUs besides ROOT")
    return doc


def split_dir(root: Path | str, split: str) -> Path:
    """Directory holding a split's files; dev/test prefer their gold folder."""
    root = Path(root)
    base = root / split
    if split != "train" and (base / "gold").is_dir():
        return base / "gold"
    return base


def load_split(root: Path | str, split: str, wrapper_key: str = "root") -> Corpus:
    """Load one split in deterministic (lexicographic filename) order."""
    if split not in SPLITS:
        raise CorpusError(f"unknown split {split!r}; expected one of {SPLITS}")
    directory = split_dir(root, split)
    if not directory.is_dir():
        raise CorpusError(f"split directory not found: {directory}")
    paths = sorted(p for p in directory.iterdir() if p.is_file() and p.suffix in (".dep", ".json"))
    if not paths:
        raise CorpusError(f"no .dep/.json documents in {directory}")
    docs = []
    for path in paths:
        try:
            docs.append(load_document(path.read_bytes(), doc_id=path.stem, wrapper_key=wrapper_key))
        except CorpusError:
            raise
        except OSError as e:
            raise CorpusError(f"cannot read {path}: {e}") from e
    return Corpus(split=split, documents=tuple(docs))


def document_to_record(doc: Document, tokens: bool = False, wrapper_key: str = "root") -> dict:
    """Canonical JSON-ready form of a document (text/parent/relation).

    With ``tokens=True`` each EDU record additionally carries its token
    list under ``"tokens"``; loaders ignore the extra field, so the
    canonical round-trip is unaffected.
    """
    records = []
    for e in doc.edus:
        rec = {"id": e.index, "parent": e.gold_head, "text": e.text, "relation": e.gold_relation}
        if tokens:
            rec["tokens"] = [] if e.index == 0 else list(edu_words(e.text))
        records.append(rec)
    return {wrapper_key: records}


def serialize_document(doc: Document, wrapper_key: str = "root") -> str:
    return json.dumps(document_to_record(doc, wrapper_key=wrapper_key), ensure_ascii=False, indent=2)


def dump_documents(corpus: Corpus, path: Path | str, tokens: bool = False) -> None:
    """Write the canonical dump of a whole split as a single JSON file."""
    payload = {
        "format_version": DOCS_DUMP_VERSION,
        "split": corpus.split,
        "documents": [
            {"doc_id": d.doc_id, **document_to_record(d, tokens=tokens)} for d in corpus.documents
        ],
    }
    Path(path).write_text(json.dumps(payload, ensure_ascii=False), encoding="utf-8")


_TSV_UNSAFE = re.compile(r"[\t\n\r]")


def documents_tsv(docs: Iterable[Document]) -> str:
    """Inspection TSV: doc_id, edu_index, text, gold_head, gold_relation."""
    lines = ["doc_id\tedu_index\ttext\tgold_head\tgold_relation"]
    for doc in docs:
        for e in doc.edus:
            text = _TSV_UNSAFE.sub(" ", e.text)
            lines.append(f"{doc.doc_id}\t{e.index}\t{text}\t{e.gold_head}\t{e.gold_relation}")
    return "\n".join(lines) + "\n"


@dataclass
class Vocab:
    """Word/char/relation inventories with reserved PAD/UNK/ROOT ids.

    Ids are dense; the ROOT symbol always maps to its reserved id and is
    never assigned a regular word id.
    """

    word_to_id: dict[str, int]
    char_to_id: dict[str, int]
    relation_to_id: dict[str, int]

    def __post_init__(self) -> None:
        for name, table in (
            ("word", self.word_to_id),
            ("char", self.char_to_id),
            ("relation", self.relation_to_id),
        ):
            for sym, want in zip(_RESERVED, (PAD_ID, UNK_ID, ROOT_ID)):
                if table.get(sym) != want:
                    raise CorpusError(f"{name} vocabulary lacks reserved {sym!r} -> {want}")
            ids = sorted(table.values())
            if ids != list(range(len(table))):
                raise CorpusError(f"{name} vocabulary ids are not dense")

    @property
    def word_size(self) -> int:
        return len(self.word_to_id)

    @property
    def char_size(self) -> int:
        return len(self.char_to_id)

    @property
    def relation_size(self) -> int:
        return len(self.relation_to_id)

    @property
    def relations(self) -> list[str]:
        """Non-reserved relation labels in id order."""
        inv = {i: r for r, i in self.relation_to_id.items()}
        return [inv[i] for i in range(len(_RESERVED), len(inv))]

    def word_id(self, token: str) -> int:
        if token == ROOT_TEXT:
            return ROOT_ID
        return self.word_to_id.get(token, UNK_ID)

    def char_id(self, ch: str) -> int:
        return self.char_to_id.get(ch, UNK_ID)

    def relation_id(self, rel: str) -> int:
        return self.relation_to_id.get(rel, UNK_ID)

    def save(self, path: Path | str) -> None:
        payload = {
            "format_version": VOCAB_VERSION,
            "word_to_id": self.word_to_id,
            "char_to_id": self.char_to_id,
            "relation_to_id": self.relation_to_id,
        }
        Path(path).write_text(json.dumps(payload, ensure_ascii=False), encoding="utf-8")

    @classmethod
    def load(cls, path: Path | str) -> "Vocab":
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        if obj.get("format_version") != VOCAB_VERSION:
            raise CorpusError(
                f"vocab version mismatch: {obj.get('format_version')!r} != {VOCAB_VERSION!r}"
            )
        return cls(
            word_to_id=dict(obj["word_to_id"]),
            char_to_id=dict(obj["char_to_id"]),
            relation_to_id=dict(obj["relation_to_id"]),
        )


def build_vocab(corpus: Corpus, tokenizer: Callable[[str], Sequence[str]] | None = None) -> Vocab:
    """Build vocabularies from a training split.

    The ROOT symbol is skipped during tokenization and keeps its reserved
    id; characters are the Unicode scalar values of the raw tokens;
    relation labels come from non-root EDUs only.  First-occurrence order
    makes ids deterministic given the corpus order.
    """
    tok = tokenizer if tokenizer is not None else _DEFAULT_TOKENIZER
    words = {sym: i for i, sym in enumerate(_RESERVED)}
    chars = {sym: i for i, sym in enumerate(_RESERVED)}
    rels = {sym: i for i, sym in enumerate(_RESERVED)}
    for doc in corpus.documents:
        for edu in doc.edus[1:]:
            for token in tok(edu.text):
                if token != ROOT_TEXT and token not in words:
                    words[token] = len(words)
                for ch in token:
                    if ch not in chars:
                        chars[ch] = len(chars)
            if edu.gold_relation not in rels:
                rels[edu.gold_relation] = len(rels)
    return Vocab(word_to_id=words, char_to_id=chars, relation_to_id=rels)
