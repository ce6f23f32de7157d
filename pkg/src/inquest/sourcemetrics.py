"""Token-level extraction of size and complexity metrics from source files.

Works on brace-delimited languages (Java, C, C#, and kin) without a real
grammar: comments and literal contents are stripped, then methods are
recognized as ``identifier ( ... ) {`` at brace depth >= 1 and measured
over their matched brace span. Cyclomatic complexity per method is 1 plus
the count of decision points (if, for, while, case, catch, &&, ||, ?)
in the span. Output is advisory input data for prioritization, not ground
truth; the conventions are fixed and documented here.
"""

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ExtractionError

DECISION_KEYWORDS = frozenset({"if", "for", "while", "case", "catch"})
DECISION_OPERATORS = frozenset({"&&", "||", "?"})

# Identifiers that look like calls or blocks but never open a method.
_NON_METHOD_IDENTIFIERS = frozenset(
    {
        "if",
        "for",
        "while",
        "switch",
        "catch",
        "else",
        "do",
        "try",
        "return",
        "new",
        "synchronized",
    }
)
_TYPE_KEYWORDS = frozenset({"class", "interface", "enum", "struct"})

SOURCE_SUFFIXES = (".java", ".c", ".cc", ".cpp", ".cs", ".h", ".hpp")

CYCLOMATIC_AGGREGATES = ("max", "mean")


@dataclass(frozen=True)
class Token:
    value: str
    line: int
    kind: str  # ident, punct, op


@dataclass(frozen=True)
class MethodMetrics:
    name: str
    start_line: int
    end_line: int
    length: int  # code lines intersecting the brace span
    cyclomatic: int


@dataclass(frozen=True)
class SourceUnitMetrics:
    unit_name: str
    loc: int
    method_count: int
    mean_method_length: float
    cyclomatic_max: int
    cyclomatic_mean: float
    methods: tuple = ()


def tokenize(text: str) -> list:
    """Token stream with comments and literal contents removed."""
    tokens, _ = _scan(text)
    return tokens


def count_loc(text: str) -> int:
    """Non-blank lines that carry anything besides comments."""
    _, code_lines = _scan(text)
    return len(code_lines)


def _scan(text: str):
    tokens = []
    code_lines = set()
    line = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch == "/" and text[i + 1 : i + 2] == "/":
            i += 2
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "/" and text[i + 1 : i + 2] == "*":
            start = line
            i += 2
            while True:
                if i >= n:
                    raise ExtractionError("unterminated block comment", line=start)
                if text[i] == "\n":
                    line += 1
                    i += 1
                elif text[i] == "*" and text[i + 1 : i + 2] == "/":
                    i += 2
                    break
                else:
                    i += 1
            continue
        if ch in ('"', "'"):
            what = "string" if ch == '"' else "character"
            start = line
            code_lines.add(line)
            i += 1
            while True:
                if i >= n:
                    raise ExtractionError(f"unterminated {what} literal", line=start)
                c = text[i]
                if c == "\n" or (c == "\\" and text[i + 1 : i + 2] == "\n"):
                    raise ExtractionError(f"unterminated {what} literal", line=start)
                if c == "\\":
                    i += 2
                    continue
                i += 1
                if c == ch:
                    break
            continue
        if not ch.isspace():
            code_lines.add(line)
        if ch == "&" and text[i + 1 : i + 2] == "&":
            tokens.append(Token("&&", line, "op"))
            i += 2
            continue
        if ch == "|" and text[i + 1 : i + 2] == "|":
            tokens.append(Token("||", line, "op"))
            i += 2
            continue
        if ch == "?":
            tokens.append(Token("?", line, "op"))
            i += 1
            continue
        if ch in "{}()":
            tokens.append(Token(ch, line, "punct"))
            i += 1
            continue
        if ch.isalpha() or ch in "_$":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_$"):
                j += 1
            tokens.append(Token(text[i:j], line, "ident"))
            i = j
            continue
        if ch.isdigit():
            # Numeric literal: consume as one unit so suffixes and hex
            # digits never leak out as identifiers.
            j = i
            while j < n and (text[j].isalnum() or text[j] == "."):
                j += 1
            i = j
            continue
        i += 1
    return tokens, code_lines


def _match_paren(tokens, open_idx):
    depth = 0
    for k in range(open_idx, len(tokens)):
        v = tokens[k].value
        if v == "(":
            depth += 1
        elif v == ")":
            depth -= 1
            if depth == 0:
                return k
    return None


def _match_brace(tokens, open_idx):
    depth = 0
    for k in range(open_idx, len(tokens)):
        v = tokens[k].value
        if v == "{":
            depth += 1
        elif v == "}":
            depth -= 1
            if depth == 0:
                return k
    raise ExtractionError("unbalanced braces: unclosed block", line=tokens[open_idx].line)


def _method_candidate(tokens, i):
    """Span (open_brace_idx, close_brace_idx) if tokens[i] starts a method."""
    t = tokens[i]
    if t.kind != "ident" or t.value in _NON_METHOD_IDENTIFIERS:
        return None
    if i > 0 and tokens[i - 1].kind == "ident" and tokens[i - 1].value == "new":
        return None
    j = i + 1
    if j >= len(tokens) or tokens[j].value != "(":
        return None
    k = _match_paren(tokens, j)
    if k is None:
        return None
    m = k + 1
    # Checked-exception clause between the parameter list and the body.
    if m < len(tokens) and tokens[m].kind == "ident" and tokens[m].value == "throws":
        m += 1
        while m < len(tokens) and tokens[m].kind == "ident":
            m += 1
    if m >= len(tokens) or tokens[m].value != "{":
        return None
    return m, _match_brace(tokens, m)


def extract_source(text: str, unit_name: str = "") -> SourceUnitMetrics:
    """Measure one source text. ``unit_name`` falls back to the declared
    type name when the text declares exactly one top-level type."""
    tokens, code_lines = _scan(text)

    methods = []
    type_names = []
    depth = 0
    i = 0
    while i < len(tokens):
        t = tokens[i]
        if t.value == "{" and t.kind == "punct":
            depth += 1
            i += 1
            continue
        if t.value == "}" and t.kind == "punct":
            depth -= 1
            if depth < 0:
                raise ExtractionError("unbalanced braces: unexpected '}'", line=t.line)
            i += 1
            continue
        if (
            depth == 0
            and t.kind == "ident"
            and t.value in _TYPE_KEYWORDS
            and i + 1 < len(tokens)
            and tokens[i + 1].kind == "ident"
        ):
            type_names.append(tokens[i + 1].value)
            i += 2
            continue
        if depth >= 1:
            candidate = _method_candidate(tokens, i)
            if candidate is not None:
                open_idx, close_idx = candidate
                span = tokens[open_idx : close_idx + 1]
                cyclo = 1 + sum(
                    1
                    for tok in span
                    if (tok.kind == "ident" and tok.value in DECISION_KEYWORDS)
                    or (tok.kind == "op" and tok.value in DECISION_OPERATORS)
                )
                start = tokens[open_idx].line
                end = tokens[close_idx].line
                length = sum(1 for ln in code_lines if start <= ln <= end)
                methods.append(
                    MethodMetrics(
                        name=t.value,
                        start_line=start,
                        end_line=end,
                        length=length,
                        cyclomatic=cyclo,
                    )
                )
                # Nested matches inside the span are part of this method.
                i = close_idx + 1
                continue
        i += 1
    if depth != 0:
        raise ExtractionError(f"unbalanced braces: {depth} unclosed at end of input")

    if not unit_name:
        unit_name = type_names[0] if len(type_names) == 1 else ""
    count = len(methods)
    return SourceUnitMetrics(
        unit_name=unit_name,
        loc=len(code_lines),
        method_count=count,
        mean_method_length=sum(m.length for m in methods) / count if count else 0.0,
        cyclomatic_max=max((m.cyclomatic for m in methods), default=0),
        cyclomatic_mean=sum(m.cyclomatic for m in methods) / count if count else 0.0,
        methods=tuple(methods),
    )


def extract_file(path) -> SourceUnitMetrics:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ExtractionError(f"cannot read {path}: {exc}") from None
    except UnicodeDecodeError as exc:
        raise ExtractionError(f"{path} is not UTF-8 text: {exc}") from None
    try:
        metrics = extract_source(text)
    except ExtractionError as exc:
        raise ExtractionError(f"{path}: {exc}") from None
    if not metrics.unit_name:
        metrics = replace(metrics, unit_name=path.stem)
    return metrics


def extract_tree(src_dir, mapping: dict | None = None, jobs: int | None = None) -> list:
    """(unit_id, SourceUnitMetrics) for every source file under src_dir.

    ``mapping`` overrides the file-to-unit assignment (keys are paths
    relative to src_dir); the default unit id is the file stem. Output is
    ordered by unit id whatever the worker count.
    """
    root = Path(src_dir)
    if not root.is_dir():
        raise ExtractionError(f"not a source directory: {root}")
    paths = sorted(
        p for p in root.rglob("*") if p.is_file() and p.suffix in SOURCE_SUFFIXES
    )
    if jobs is None or jobs <= 1 or len(paths) <= 1:
        extracted = [extract_file(p) for p in paths]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            extracted = list(pool.map(extract_file, paths))

    out = []
    seen = {}
    for path, metrics in zip(paths, extracted):
        rel = path.relative_to(root).as_posix()
        unit_id = (mapping or {}).get(rel, path.stem)
        if unit_id in seen:
            raise ExtractionError(
                f"{rel}: unit id {unit_id!r} already produced by {seen[unit_id]}"
            )
        seen[unit_id] = rel
        out.append((unit_id, metrics))
    out.sort(key=lambda pair: pair[0])
    return out


def load_mapping_csv(path) -> dict:
    """file_path,unit_id rows overriding the default stem mapping."""
    out = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["file_path", "unit_id"]:
            raise ExtractionError(
                f"{path}: mapping header must be file_path,unit_id, got {header!r}"
            )
        for rownum, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ExtractionError(f"{path} row {rownum}: expected 2 cells")
            out[row[0]] = row[1]
    return out


def write_product_csv(extracted, path, aggregate: str = "max") -> None:
    """Emit (unit_id, metrics) pairs as a product-metrics CSV.

    ``aggregate`` picks how per-method complexities roll up to the unit
    (max or mean). A unit with no methods still has one straight path,
    so its complexity is clamped to 1.
    """
    if aggregate not in CYCLOMATIC_AGGREGATES:
        raise ValueError(f"aggregate must be one of {CYCLOMATIC_AGGREGATES}, got {aggregate!r}")
    rows = sorted(extracted, key=lambda pair: pair[0])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(
            [
                "unit_id",
                "class_length_loc",
                "mean_method_length",
                "cyclomatic",
                "statement_loc",
                "waste_per_line",
            ]
        )
        for unit_id, m in rows:
            value = m.cyclomatic_max if aggregate == "max" else m.cyclomatic_mean
            w.writerow(
                [
                    unit_id,
                    m.loc,
                    repr(float(m.mean_method_length)),
                    repr(float(max(1.0, value))),
                    "",
                    "",
                ]
            )
