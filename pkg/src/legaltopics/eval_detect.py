"""Detection-quality metrics: IoU, greedy matching, AP, mAP50, mAP50-95.

AP follows the COCO-style 101-point interpolation; mAP50-95 averages IoU
thresholds 0.50 to 0.95 in steps of 0.05.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .corpus import BoundingBox, CorpusError

MAP50_THRESHOLDS = [0.5]
MAP50_95_THRESHOLDS = [round(0.5 + 0.05 * i, 2) for i in range(10)]


@dataclass(frozen=True)
class Detection:
    box: BoundingBox
    class_id: str
    score: float
    image: str = ""


@dataclass(frozen=True)
class GroundTruthBox:
    box: BoundingBox
    class_id: str
    image: str = ""


@dataclass
class MetricReport:
    metrics: dict[str, float]
    config: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({"metrics": self.metrics, "config": self.config,
                           "warnings": self.warnings}, indent=2, sort_keys=True)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    ix = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    iy = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    union = a.area() + b.area() - inter
    return inter / union


def match_detections(preds, gts, iou_threshold: float):
    """Greedy single-image single-class matching.

    Predictions are processed in descending score (ties by input order);
    each is matched to the unmatched ground truth of highest IoU at or
    above the threshold. Returns (flags aligned to score order, fn_count)
    where flags[i] is True for a true positive.
    """
    preds = list(preds)
    gts = list(gts)
    order = sorted(range(len(preds)), key=lambda i: (-preds[i].score, i))
    matched = [False] * len(gts)
    flags = []
    for i in order:
        best_j, best_iou = -1, 0.0
        for j, gt in enumerate(gts):
            if matched[j]:
                continue
            v = iou(preds[i].box, gt.box)
            if v >= iou_threshold and v > best_iou:
                best_j, best_iou = j, v
        if best_j >= 0:
            matched[best_j] = True
            flags.append(True)
        else:
            flags.append(False)
    fn = matched.count(False)
    return flags, fn


def average_precision(flags, n_gt: int) -> tuple[float, bool]:
    """101-point interpolated AP from TP/FP flags ordered by descending score.

    Returns (ap, undefined) where undefined marks the n_gt == 0 case
    (AP reported as 0 with a warning flag).
    """
    if n_gt == 0:
        return 0.0, True
    tp = 0
    recalls, precisions = [], []
    for k, flag in enumerate(flags, 1):
        if flag:
            tp += 1
        recalls.append(tp / n_gt)
        precisions.append(tp / k)
    ap = 0.0
    for r in np.linspace(0.0, 1.0, 101):
        p = max((prec for rec, prec in zip(recalls, precisions) if rec >= r),
                default=0.0)
        ap += p
    return ap / 101.0, False


def mean_ap(preds, gts, thresholds) -> MetricReport:
    """Per-class AP and mAP over the given IoU thresholds.

    Classes absent from the ground truth contribute no AP term; their
    predictions are reported in a warning instead.
    """
    preds = list(preds)
    gts = list(gts)
    gt_classes = sorted({g.class_id for g in gts})
    if not gt_classes:
        raise CorpusError("no ground-truth boxes in any class")
    pred_only = sorted({p.class_id for p in preds} - set(gt_classes))
    warnings = [f"predictions for class {c!r} have no ground truth"
                for c in pred_only]

    metrics: dict[str, float] = {}
    per_threshold_map = []
    for t in thresholds:
        aps = []
        for cls in gt_classes:
            cls_gts = [g for g in gts if g.class_id == cls]
            cls_preds = [p for p in preds if p.class_id == cls]
            # match per image, then pool flags by descending score
            scored_flags = []
            n_gt = 0
            for image in sorted({g.image for g in cls_gts} |
                                {p.image for p in cls_preds}):
                img_preds = [p for p in cls_preds if p.image == image]
                img_gts = [g for g in cls_gts if g.image == image]
                flags, _ = match_detections(img_preds, img_gts, t)
                order = sorted(range(len(img_preds)),
                               key=lambda i: (-img_preds[i].score, i))
                for flag, i in zip(flags, order):
                    scored_flags.append((img_preds[i].score, flag))
                n_gt += len(img_gts)
            scored_flags.sort(key=lambda sf: -sf[0])
            ap, undefined = average_precision([f for _, f in scored_flags], n_gt)
            if undefined:
                warnings.append(f"AP undefined for class {cls!r} (no GT)")
            aps.append(ap)
            metrics[f"AP@{t:.2f}/{cls}"] = ap
        per_threshold_map.append(sum(aps) / len(aps))
        metrics[f"mAP@{t:.2f}"] = per_threshold_map[-1]
    metrics["mAP"] = sum(per_threshold_map) / len(per_threshold_map)
    return MetricReport(metrics=metrics,
                        config={"iou_thresholds": [float(t) for t in thresholds]},
                        warnings=warnings)


def _parse_box_line(obj, line_ref: str, with_score: bool):
    try:
        box = BoundingBox(*[float(v) for v in obj["bbox"]])
        if with_score:
            return Detection(box=box, class_id=str(obj["class"]),
                             score=float(obj["score"]),
                             image=str(obj.get("image", "")))
        return GroundTruthBox(box=box, class_id=str(obj["class"]),
                              image=str(obj.get("image", "")))
    except (KeyError, TypeError, ValueError, CorpusError) as exc:
        raise CorpusError(f"{line_ref}: {exc}") from None


def read_boxes(path, with_score: bool):
    """Read a prediction (with_score=True) or ground-truth JSONL file."""
    out = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{line_no}: {exc}") from None
            out.append(_parse_box_line(obj, f"{path}:{line_no}", with_score))
    return out
