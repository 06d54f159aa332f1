"""Task grammar: templated language commands over the tabletop vocabulary.

The grammar is closed: every command is a pure function of (template, slots)
and parses back losslessly.  Commands are also mapped to fixed-length token id
lists for the learned conditioning table.
"""

from __future__ import annotations

from dataclasses import dataclass

TEMPLATES = ("put_in", "move_to_region")
COLORS = ("red", "green", "blue", "yellow", "purple", "orange")
SHAPES = ("block", "disc", "bar")
CONTAINER_KINDS = ("pot", "bowl", "plate")
REGION_NAMES = ("left", "right", "top", "bottom", "center")

# (color, shape) combinations reserved for the heldout generalization split.
# They never appear in train scenes or train tasks; every color and every
# shape still occurs in training through other pairings.
RESERVED_COMBOS = (
    ("red", "bar"),
    ("green", "disc"),
    ("purple", "block"),
    ("orange", "disc"),
)

TRAIN_COMBOS = tuple(
    (c, s) for c in COLORS for s in SHAPES if (c, s) not in RESERVED_COMBOS
)

_REGION_PHRASES = {
    "left": "the left side",
    "right": "the right side",
    "top": "the top",
    "bottom": "the bottom",
    "center": "the center",
}
_PHRASE_TO_REGION = {v: k for k, v in _REGION_PHRASES.items()}


class TaskParseError(ValueError):
    pass


@dataclass(frozen=True)
class TaskSpec:
    """A structured language command with a canonical string form."""

    template: str  # one of TEMPLATES
    object_color: str
    object_shape: str
    # put_in: (container_kind, container_color); move_to_region: (region, "")
    target_kind: str
    target_color: str = ""

    def __post_init__(self):
        if self.template not in TEMPLATES:
            raise TaskParseError(f"unknown template {self.template!r}")
        if self.object_color not in COLORS or self.object_shape not in SHAPES:
            raise TaskParseError(
                f"unknown object slot ({self.object_color!r}, {self.object_shape!r})"
            )
        if self.template == "put_in":
            if self.target_kind not in CONTAINER_KINDS or self.target_color not in COLORS:
                raise TaskParseError(
                    f"unknown container slot ({self.target_kind!r}, {self.target_color!r})"
                )
        else:
            if self.target_kind not in REGION_NAMES or self.target_color != "":
                raise TaskParseError(f"unknown region slot {self.target_kind!r}")

    @property
    def text(self) -> str:
        obj = f"the {self.object_color} {self.object_shape}"
        if self.template == "put_in":
            return f"put {obj} in the {self.target_color} {self.target_kind}"
        return f"move {obj} to {_REGION_PHRASES[self.target_kind]}"

    @classmethod
    def parse(cls, text: str) -> "TaskSpec":
        words = text.strip().split()
        try:
            if words[0] == "put":
                # put the <color> <shape> in the <color> <kind>
                if words[1] != "the" or words[4] != "in" or words[5] != "the":
                    raise IndexError
                return cls("put_in", words[2], words[3], words[7], words[6])
            if words[0] == "move":
                # move the <color> <shape> to <region phrase>
                if words[1] != "the" or words[4] != "to":
                    raise IndexError
                phrase = " ".join(words[5:])
                if phrase not in _PHRASE_TO_REGION:
                    raise TaskParseError(f"unknown region phrase {phrase!r}")
                return cls("move_to_region", words[2], words[3], _PHRASE_TO_REGION[phrase])
        except IndexError:
            pass
        raise TaskParseError(f"cannot parse command {text!r}")

    @property
    def object_combo(self) -> tuple[str, str]:
        return (self.object_color, self.object_shape)

    @property
    def references_reserved(self) -> bool:
        return self.object_combo in RESERVED_COMBOS

    def token_ids(self) -> list[int]:
        return task_token_ids(self)


# ---------------------------------------------------------------------------
# Token vocabulary for the learned conditioning table.  Slot values are
# namespaced so that e.g. a red object and a red container get distinct rows
# (a plain sum of rows would otherwise confuse the two).

NULL_TOKEN = 0
PAD_TOKEN = 1
TOKENS_PER_TASK = 5


def _build_vocab() -> dict[str, int]:
    vocab: dict[str, int] = {"<null>": NULL_TOKEN, "<pad>": PAD_TOKEN}
    for t in TEMPLATES:
        vocab[f"tmpl:{t}"] = len(vocab)
    for c in COLORS:
        vocab[f"obj_color:{c}"] = len(vocab)
    for s in SHAPES:
        vocab[f"obj_shape:{s}"] = len(vocab)
    for c in COLORS:
        vocab[f"tgt_color:{c}"] = len(vocab)
    for k in CONTAINER_KINDS:
        vocab[f"tgt_kind:{k}"] = len(vocab)
    for r in REGION_NAMES:
        vocab[f"region:{r}"] = len(vocab)
    return vocab


VOCAB = _build_vocab()
VOCAB_SIZE = len(VOCAB)


def task_token_ids(task: TaskSpec) -> list[int]:
    """Fixed-length token id list for a command (padded)."""
    ids = [
        VOCAB[f"tmpl:{task.template}"],
        VOCAB[f"obj_color:{task.object_color}"],
        VOCAB[f"obj_shape:{task.object_shape}"],
    ]
    if task.template == "put_in":
        ids += [VOCAB[f"tgt_color:{task.target_color}"], VOCAB[f"tgt_kind:{task.target_kind}"]]
    else:
        ids += [VOCAB[f"region:{task.target_kind}"], PAD_TOKEN]
    return ids


def null_token_ids() -> list[int]:
    """Token list for the dropped-text condition (dedicated null row)."""
    return [NULL_TOKEN] * TOKENS_PER_TASK
