"""Command-line interface.

Structured results go to stdout as JSON (one object per line where the
command is per-sentence); diagnostics go to stderr. Exit codes: 0 on
success, 1 on a data error, 2 on a usage error.
"""

import argparse
import json
import sys

from . import ambiguity as amb
from .errors import SynrepError
from .model import load_model, save_model
from .nml import nml_loss
from .numerics import pca_2d
from .prosody import (
    Lexicon,
    TrainConfig,
    corpus_from_trees,
    evaluate,
    make_phoneme_level,
    train,
)
from .encoder import encode_sentence
from .treebank import (
    build_vocabulary,
    parse_tree,
    read_tree_file,
    serialize_tree,
)
from .linearizer import linearize_pair


def _emit(obj) -> None:
    print(json.dumps(obj, separators=(",", ":")))


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def cmd_parse(args) -> int:
    with open(args.input, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            try:
                print(serialize_tree(parse_tree(stripped)))
            except SynrepError as err:
                return _fail(f"{args.input}: line {lineno}: {err}")
    return 0


def cmd_linearize(args) -> int:
    trees = read_tree_file(args.input)
    if not trees:
        return 0
    vocab = build_vocabulary(trees)
    for tree in trees:
        pair = linearize_pair(tree, vocab)
        _emit({
            "left": {
                "labels": [vocab.labels[i] for i in pair.left.label_ids],
                "word_pos": list(pair.left.word_positions),
            },
            "right": {
                "labels": [vocab.labels[i] for i in pair.right.label_ids],
                "word_pos": list(pair.right.word_positions),
            },
            "words": tree.words(),
        })
    return 0


def cmd_featurize(args) -> int:
    model, vocab = load_model(args.model)
    lexicon = Lexicon.from_file(args.lexicon, policy=args.lexicon_policy)
    if lexicon.phonemes != model.phonemes:
        return _fail(
            "lexicon phoneme inventory does not match the model's; train "
            "with this lexicon or featurize with the training one"
        )
    for tree in read_tree_file(args.input):
        words = tree.words()
        features = encode_sentence(model, tree, vocab)
        phoneme_level = make_phoneme_level(
            features, words, lexicon, model.phoneme_table
        )
        _emit({
            "words": words,
            "phonemes": list(phoneme_level.phonemes),
            "syntactic": features.per_word.tolist(),
            "phoneme_level": phoneme_level.rows.tolist(),
        })
    return 0


def cmd_train(args) -> int:
    config = TrainConfig.from_file(args.config)
    overrides = {
        "seed": args.seed,
        "nml_weight": args.nml_weight,
        "learning_rate": args.learning_rate,
        "epochs": args.epochs,
    }
    if args.dims is not None:
        d_emb, d_hid, d_ph = args.dims
        overrides.update(d_emb=d_emb, d_hid=d_hid, d_ph=d_ph)
    config = config.override(**overrides)

    trees = read_tree_file(args.corpus)
    lexicon = None
    if args.lexicon is not None:
        lexicon = Lexicon.from_file(args.lexicon, policy=args.lexicon_policy)
    result = train(corpus_from_trees(trees), config, lexicon=lexicon)
    for entry in result.log.entries:
        _emit({
            "epoch": entry.epoch,
            "task_loss": entry.task_loss,
            "nml_loss": entry.nml_loss,
            "nuclear_norm": entry.nuclear_norm,
            "total_loss": entry.total_loss,
        })
    save_model(args.out, result.model, result.vocab)
    return 0


def cmd_eval(args) -> int:
    model, vocab = load_model(args.model)
    trees = read_tree_file(args.corpus)
    metrics = evaluate(model, vocab, corpus_from_trees(trees))
    _emit({
        "accuracy": metrics.accuracy,
        "loss": metrics.loss,
        "words": metrics.word_count,
    })
    return 0


def cmd_ambiguity(args) -> int:
    spec = amb.EnumerationSpec(
        words=args.words,
        labels=tuple(args.labels.split(",")),
        preterminal=args.preterminal,
        max_children=args.max_children,
        max_unary=args.max_unary,
    )
    trees = amb.enumerate_trees(spec)
    vocab = build_vocabulary(trees)
    report = amb.collision_report(trees, vocab).to_dict()
    if args.witness:
        witness = amb.collision_witness(trees, vocab)
        report["witness"] = (
            None if witness is None
            else [serialize_tree(witness[0]), serialize_tree(witness[1])]
        )
    _emit(report)
    return 0


def cmd_export_embeddings(args) -> int:
    model, vocab = load_model(args.model)
    result = nml_loss(model.embedding)
    scores = pca_2d(model.embedding.weights)
    _emit({
        "labels": list(vocab.labels),
        "pca": scores.tolist(),
        "singular_values": result.singular_values.tolist(),
        "nuclear_norm": float(result.singular_values.sum()),
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="synrep",
        description="Syntactic representations from constituency-tree traversals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="validate trees and print canonical form")
    p.add_argument("input")
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("linearize", help="emit both traversals per tree as JSON")
    p.add_argument("input")
    p.set_defaults(fn=cmd_linearize)

    p = sub.add_parser("featurize", help="export phoneme-level features as JSON lines")
    p.add_argument("model")
    p.add_argument("input")
    p.add_argument("lexicon")
    _add_lexicon_policy(p)
    p.set_defaults(fn=cmd_featurize)

    p = sub.add_parser("train", help="train on a tree file, write a checkpoint")
    p.add_argument("config", help="JSON training config (may be {})")
    p.add_argument("corpus")
    p.add_argument("--out", required=True, help="checkpoint path to write")
    p.add_argument("--lexicon", help="lexicon file for phoneme embeddings")
    _add_lexicon_policy(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--lambda", dest="nml_weight", type=float,
                   help="weight of the nuclear-norm term")
    p.add_argument("--lr", dest="learning_rate", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--dims", type=_dims, metavar="D_EMB,D_HID,D_PH")
    p.add_argument("--format-version", type=int, choices=[1], default=1)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("eval", help="accuracy and loss of a checkpoint on a tree file")
    p.add_argument("model")
    p.add_argument("corpus")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("ambiguity", help="collision statistics over a tree family")
    p.add_argument("--words", type=int, default=3)
    p.add_argument("--labels", default="A,B", help="comma-separated phrase labels")
    p.add_argument("--preterminal", default="P")
    p.add_argument("--max-children", type=int, default=3)
    p.add_argument("--max-unary", type=int, default=1)
    p.add_argument("--witness", action="store_true",
                   help="include one left-colliding, pair-separated tree pair")
    p.set_defaults(fn=cmd_ambiguity)

    p = sub.add_parser("export-embeddings",
                       help="PCA scores and spectrum of the label embeddings")
    p.add_argument("model")
    p.set_defaults(fn=cmd_export_embeddings)
    return parser


def _add_lexicon_policy(p) -> None:
    p.add_argument("--lexicon-policy", choices=Lexicon.POLICIES, default="strict")


def _dims(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected D_EMB,D_HID,D_PH")
    return tuple(int(p) for p in parts)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (SynrepError, OSError, ValueError, json.JSONDecodeError) as err:
        return _fail(str(err))


def run() -> None:
    sys.exit(main())
