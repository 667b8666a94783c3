use crate::{GridError, OccupancyGrid, ProbGrid};

/// Candidate binarization thresholds: 0.10, 0.15, ..., 0.90.
pub const THRESHOLD_STEPS: usize = 17;

/// The `p` search grid. Values are exact decimal-to-f64 conversions of
/// `0.10 + 0.05k`; predictions are promoted from `f32` before comparison.
pub fn threshold_candidates() -> impl Iterator<Item = f64> {
    (0..THRESHOLD_STEPS).map(|k| (10 + 5 * k) as f64 / 100.0)
}

/// Per-pair metric record as written to report CSVs.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub category: String,
    pub n_voxels: usize,
    pub iou: f64,
    pub ce: f64,
    pub precision: f64,
    pub recall: f64,
    pub threshold_p: f64,
}

impl MetricsReport {
    pub const CSV_HEADER: &'static str = "category,n,iou,ce,precision,recall,threshold";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.6},{:.6},{:.6},{:.6},{:.2}",
            self.category, self.n_voxels, self.iou, self.ce, self.precision, self.recall,
            self.threshold_p
        )
    }
}

fn check_resolutions(pred: &ProbGrid, gt: &OccupancyGrid) -> Result<(), GridError> {
    if pred.resolution() != gt.resolution() {
        return Err(GridError::ResolutionMismatch {
            left: pred.resolution(),
            right: gt.resolution(),
        });
    }
    Ok(())
}

/// Intersection-over-union of the binarized prediction (strictly `> p`)
/// against the ground-truth occupied set. Both sets empty counts as 1.0.
pub fn iou(pred: &ProbGrid, gt: &OccupancyGrid, p: f64) -> Result<f64, GridError> {
    check_resolutions(pred, gt)?;
    let mut inter = 0u64;
    let mut union = 0u64;
    for (i, &v) in pred.values().iter().enumerate() {
        let pv = f64::from(v) > p;
        let gv = gt.get_linear(i);
        inter += u64::from(pv && gv);
        union += u64::from(pv || gv);
    }
    Ok(if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    })
}

/// Mean binary cross-entropy with predictions clamped to
/// `[1e-7, 1 - 1e-7]`, natural log.
pub fn cross_entropy(pred: &ProbGrid, gt: &OccupancyGrid) -> Result<f64, GridError> {
    check_resolutions(pred, gt)?;
    const EPS: f64 = 1e-7;
    let mut sum = 0.0f64;
    for (i, &v) in pred.values().iter().enumerate() {
        let y = f64::from(v).clamp(EPS, 1.0 - EPS);
        sum -= if gt.get_linear(i) {
            y.ln()
        } else {
            (1.0 - y).ln()
        };
    }
    Ok(sum / pred.voxel_count() as f64)
}

/// (precision, recall) of the binarized prediction at threshold `p`.
/// A degenerate denominator (no predicted / no actual positives) yields 1.0.
pub fn precision_recall(
    pred: &ProbGrid,
    gt: &OccupancyGrid,
    p: f64,
) -> Result<(f64, f64), GridError> {
    check_resolutions(pred, gt)?;
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut fn_ = 0u64;
    for (i, &v) in pred.values().iter().enumerate() {
        let pv = f64::from(v) > p;
        let gv = gt.get_linear(i);
        tp += u64::from(pv && gv);
        fp += u64::from(pv && !gv);
        fn_ += u64::from(!pv && gv);
    }
    let precision = if tp + fp == 0 {
        1.0
    } else {
        tp as f64 / (tp + fp) as f64
    };
    let recall = if tp + fn_ == 0 {
        1.0
    } else {
        tp as f64 / (tp + fn_) as f64
    };
    Ok((precision, recall))
}

/// Exhaustive scan of the candidate thresholds, maximizing mean IoU over
/// the paired set. Ties break toward the smaller `p`.
pub fn search_threshold(
    preds: &[ProbGrid],
    gts: &[OccupancyGrid],
) -> Result<f64, GridError> {
    if preds.is_empty() || preds.len() != gts.len() {
        return Err(GridError::InvalidArgument(format!(
            "need nonempty paired lists, got {} preds and {} gts",
            preds.len(),
            gts.len()
        )));
    }
    let mut best_p = 0.0;
    let mut best_iou = f64::NEG_INFINITY;
    for p in threshold_candidates() {
        let mut total = 0.0;
        for (pred, gt) in preds.iter().zip(gts) {
            total += iou(pred, gt, p)?;
        }
        let mean = total / preds.len() as f64;
        if mean > best_iou {
            best_iou = mean;
            best_p = p;
        }
    }
    Ok(best_p)
}
