"""Command-line front end.

Subcommands: synth (synthetic corpus and walks), train (classifier bank),
track (frames -> states -> trajectory), eval (metrics + confusion figure),
plot (re-render figures from saved delimited files).

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import re
import sys

import numpy as np

from . import dcs, ecoc, evaluation, geometry, hog, plotting, segmentation, synthgait, trajectory
from .config import RunConfig, derive_seed, load_config
from .errors import EmptyStream, GaitPathError, IoFailure
from .states import StateLabel, classes_for

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_override_flags(parser: _Parser) -> None:
    parser.add_argument("--config", help="key=value configuration file")
    for field in dataclasses.fields(RunConfig):
        flag = "--" + field.name.replace("_", "-")
        if field.type in ("bool", bool):
            parser.add_argument(flag, action="store_const", const=True, default=None)
        else:
            kind = {"int": int, "float": float, "str": str}.get(str(field.type), str)
            parser.add_argument(flag, type=kind, default=None)


def _build_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    for field in dataclasses.fields(RunConfig):
        value = getattr(args, field.name, None)
        if value is not None:
            setattr(cfg, field.name, value)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------- synth

def cmd_synth(cfg: RunConfig) -> int:
    out = cfg.output_dir
    dataset_dir = os.path.join(out, "dataset")
    os.makedirs(dataset_dir, exist_ok=True)
    silhouettes, labels = synthgait.generate_dataset(
        cfg.per_class, noise=cfg.noise, seed=derive_seed(cfg.seed, "synth.dataset"))
    counters: dict[StateLabel, int] = {}
    for sil, label in zip(silhouettes, labels):
        class_dir = os.path.join(dataset_dir, f"P{label.pose}_V{label.viewpoint}")
        os.makedirs(class_dir, exist_ok=True)
        index = counters.get(label, 0)
        counters[label] = index + 1
        segmentation.write_pgm(os.path.join(class_dir, f"{index:04d}.pgm"),
                               segmentation.mask_to_image(sil))
    print(f"wrote {len(labels)} silhouettes across {len(counters)} classes to {dataset_dir}")

    if cfg.walk:
        walk_dir = os.path.join(out, "walk")
        frames_dir = os.path.join(walk_dir, "frames")
        os.makedirs(frames_dir, exist_ok=True)
        spec = synthgait.WalkSpec(path_kind=cfg.walk,
                                  frames_per_pose=cfg.frames_per_pose,
                                  cycles=cfg.cycles,
                                  seed=derive_seed(cfg.seed, "synth.walk"))
        frames, truth = synthgait.generate_walk(spec, noise_level=cfg.noise,
                                                start_view=cfg.start_view, raw=True)
        for i, frame in enumerate(frames, start=1):
            # dark walker on a light background, as the segmentation default expects
            img = 255 - segmentation.mask_to_image(frame)
            segmentation.write_pgm(os.path.join(frames_dir, f"{i:06d}.pgm"), img)
        _write_states_csv(os.path.join(walk_dir, "truth.csv"), truth)
        print(f"wrote {len(frames)} walk frames to {frames_dir}")
    return EXIT_OK


# ---------------------------------------------------------------- train

_CLASS_DIR_RE = re.compile(r"^P([1-8])_V([1-8])$")


def _load_dataset(dataset_dir):
    silhouettes, labels = [], []
    for name in sorted(os.listdir(dataset_dir)):
        match = _CLASS_DIR_RE.match(name)
        if not match:
            continue
        label = StateLabel(int(match.group(1)), int(match.group(2)))
        class_dir = os.path.join(dataset_dir, name)
        for fname in sorted(os.listdir(class_dir)):
            if not fname.endswith(".pgm"):
                continue
            img = segmentation.read_image(os.path.join(class_dir, fname))
            if img.shape != (segmentation.SILHOUETTE_HEIGHT, segmentation.SILHOUETTE_WIDTH):
                raise IoFailure(f"{fname}: silhouettes must be 96x160")
            silhouettes.append(img > 127)
            labels.append(label)
    if not silhouettes:
        raise IoFailure(f"no class directories found under {dataset_dir}")
    return silhouettes, labels


def cmd_train(cfg: RunConfig) -> int:
    silhouettes, labels = _load_dataset(cfg.dataset_dir)
    features = hog.extract_batch(silhouettes).astype(float)
    bank = train_bank(features, labels,
                      ecoc.TrainConfig(c=cfg.c, tol=cfg.tol, max_epochs=cfg.max_epochs,
                                       seed=derive_seed(cfg.seed, "train")))
    dcs.save_bank(cfg.model_dir, bank, q=cfg.q)
    print(f"trained 65 models on {len(labels)} samples -> {cfg.model_dir}")
    return EXIT_OK


def train_bank(features: np.ndarray, labels, cfg: ecoc.TrainConfig) -> dcs.ClassifierBank:
    """Train the 64-class model and all 64 selectors from one feature set."""
    from .states import ALL_STATES

    c64 = ecoc.train_ecoc(features, labels, ALL_STATES, cfg)
    label_arr = np.array([(s.pose, s.viewpoint) for s in labels])
    c4 = {}
    for pose in range(1, 9):
        for view in range(1, 9):
            class_set = classes_for(pose, view)
            wanted = {(s.pose, s.viewpoint) for s in class_set}
            sel = np.array([tuple(pv) in wanted for pv in label_arr])
            sub_labels = [labels[i] for i in np.flatnonzero(sel)]
            c4[(pose, view)] = ecoc.train_ecoc(features[sel], sub_labels, class_set, cfg)
    return dcs.ClassifierBank(c64=c64, c4=c4)


# ---------------------------------------------------------------- track

def _list_frames(frames_dir):
    try:
        names = sorted(n for n in os.listdir(frames_dir)
                       if n.lower().endswith((".pgm", ".ppm")))
    except OSError as exc:
        raise IoFailure(f"cannot list frame directory {frames_dir}") from exc
    if not names:
        raise EmptyStream(f"no frames found in {frames_dir}")
    return [os.path.join(frames_dir, n) for n in names]


def _write_states_csv(path, states) -> None:
    try:
        with open(path, "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh)
            writer.writerow(["frame", "pose", "viewpoint"])
            for i, s in enumerate(states, start=1):
                writer.writerow([i, s.pose, s.viewpoint])
    except OSError as exc:
        raise IoFailure(f"cannot write state file {path}") from exc


def read_states_csv(path):
    states = []
    try:
        with open(path, "r", newline="", encoding="ascii") as fh:
            reader = csv.DictReader(fh)
            for row in reader:
                states.append(StateLabel(int(row["pose"]), int(row["viewpoint"])))
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise IoFailure(f"cannot parse state file {path}") from exc
    return states


def cmd_track(cfg: RunConfig, frames_dir: str) -> int:
    bank, default_q = dcs.load_bank(cfg.model_dir)
    q = cfg.q if cfg.q else default_q

    warp = None
    if cfg.phi > 0:
        presets = geometry.load_presets(cfg.preset_file) if cfg.preset_file else []
        preset = geometry.preset_for_elevation(cfg.phi, presets)
        if preset is not None:
            warp = preset.matrix

    features = []
    for path in _list_frames(frames_dir):
        try:
            img = segmentation.read_image(path)
            if warp is not None:
                img = geometry.warp_image(img, warp, img.shape[1], img.shape[0])
            sil = segmentation.segment_frame(
                img, threshold=cfg.threshold, sigma=cfg.sigma,
                min_pixels=cfg.min_pixels,
                foreground_is_dark=not cfg.bright_foreground)
            features.append(hog.extract(sil))
        except GaitPathError as exc:
            raise type(exc)(f"{os.path.basename(path)}: {exc}") from exc

    states = dcs.run_dcs(features, bank,
                         dcs.DcsConfig(q=q, reinit_period=cfg.reinit_period))
    # The initialization frames are classified independently, so their
    # transitions carry no graph guarantee; the path starts at frame q.
    start = min(q, len(states)) - 1
    result = trajectory.estimate_trajectory(states[start:], step_len=cfg.step_len)
    if start:
        result.frames = [(f + start,) + tuple(rest) for (f, *rest) in result.frames]
        result.skeletons = [dataclasses.replace(s, frame=s.frame + start)
                            for s in result.skeletons]

    os.makedirs(cfg.output_dir, exist_ok=True)
    _write_states_csv(os.path.join(cfg.output_dir, "states.csv"), states)
    trajectory.write_trajectory_csv(os.path.join(cfg.output_dir, "trajectory.csv"), result)
    trajectory.write_skeletons_jsonl(os.path.join(cfg.output_dir, "skeletons.jsonl"), result)
    plotting.plot_trajectory(result, os.path.join(cfg.output_dir, "trajectory.svg"))
    print(f"tracked {len(states)} frames -> {cfg.output_dir}")
    return EXIT_OK


# ---------------------------------------------------------------- eval

def cmd_eval(cfg: RunConfig, truth_file: str, pred_file: str) -> int:
    truth = read_states_csv(truth_file)
    pred = read_states_csv(pred_file)
    report = evaluation.compute_errors(truth, pred)
    matrix = evaluation.confusion(truth, pred)

    os.makedirs(cfg.output_dir, exist_ok=True)
    report_path = os.path.join(cfg.output_dir, "report.json")
    with open(report_path, "w", encoding="ascii") as fh:
        fh.write(evaluation.report_to_json(report, matrix))
    plotting.plot_confusion(matrix, os.path.join(cfg.output_dir, "confusion.svg"))

    print(f"frames: {report.frame_count}")
    print(f"e_pose  with TE: {report.e_pose_with_te:.1f}%  no TE: {report.e_pose_no_te:.1f}%")
    print(f"e_view  with TE: {report.e_view_with_te:.1f}%  no TE: {report.e_view_no_te:.1f}%")
    return EXIT_OK


# ---------------------------------------------------------------- plot

def cmd_plot(cfg: RunConfig, trajectory_csv: str | None, report_json: str | None) -> int:
    os.makedirs(cfg.output_dir, exist_ok=True)
    if trajectory_csv:
        states = read_states_csv(trajectory_csv)
        result = trajectory.estimate_trajectory(states, step_len=cfg.step_len)
        plotting.plot_trajectory(result, os.path.join(cfg.output_dir, "trajectory.svg"))
    if report_json:
        try:
            with open(report_json, "r", encoding="ascii") as fh:
                payload = json.load(fh)
            matrix = np.asarray(payload["viewpoint_confusion"], dtype=int)
        except (OSError, KeyError, ValueError) as exc:
            raise IoFailure(f"cannot parse report {report_json}") from exc
        plotting.plot_confusion(matrix, os.path.join(cfg.output_dir, "confusion.svg"))
    if not trajectory_csv and not report_json:
        raise IoFailure("plot needs --trajectory and/or --report")
    return EXIT_OK


# ---------------------------------------------------------------- main

def build_parser() -> _Parser:
    parser = _Parser(prog="gaitpath",
                     description="gait pose-viewpoint estimation and trajectory reconstruction")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, extra in (
        ("synth", []),
        ("train", []),
        ("track", [("frames", {"help": "directory of PGM/PPM frames"})]),
        ("eval", [("truth", {"help": "ground-truth state CSV"}),
                  ("pred", {"help": "predicted state CSV"})]),
        ("plot", [("--trajectory", {"help": "trajectory or state CSV"}),
                  ("--report", {"help": "evaluation report JSON"})]),
    ):
        p = sub.add_parser(name)
        for arg, kwargs in extra:
            p.add_argument(arg, **kwargs)
        _add_override_flags(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _build_config(args)
        if args.command == "synth":
            return cmd_synth(cfg)
        if args.command == "train":
            return cmd_train(cfg)
        if args.command == "track":
            return cmd_track(cfg, args.frames)
        if args.command == "eval":
            return cmd_eval(cfg, args.truth, args.pred)
        if args.command == "plot":
            return cmd_plot(cfg, args.trajectory, args.report)
        parser.error(f"unknown command {args.command}")
    except (GaitPathError, ValueError) as exc:
        print(f"gaitpath: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except AssertionError as exc:
        print(f"gaitpath: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
