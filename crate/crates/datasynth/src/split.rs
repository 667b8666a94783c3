use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::SynthError;

/// Deterministic model-level split. Returns one id list per ratio, in
/// order; counts follow the largest-remainder rule so they always sum to
/// the model count.
pub fn split_models(
    model_ids: &[String],
    ratios: &[f64],
    seed: u64,
) -> Result<Vec<Vec<String>>, SynthError> {
    if ratios.is_empty() {
        return Err(SynthError::InvalidArgument("no split ratios given".into()));
    }
    if ratios.iter().any(|r| *r < 0.0) {
        return Err(SynthError::InvalidArgument("negative split ratio".into()));
    }
    let total: f64 = ratios.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(SynthError::InvalidArgument(format!(
            "split ratios sum to {total}, expected 1"
        )));
    }
    let nonzero = ratios.iter().filter(|r| **r > 0.0).count();
    if model_ids.len() < nonzero {
        return Err(SynthError::InvalidArgument(format!(
            "{} models cannot fill {} nonzero splits",
            model_ids.len(),
            nonzero
        )));
    }

    let mut ids: Vec<String> = model_ids.to_vec();
    ids.sort(); // input order must not matter
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);

    let n = ids.len();
    let mut counts: Vec<usize> = ratios.iter().map(|r| (r * n as f64).floor() as usize).collect();
    // Give every nonzero split at least one model before distributing the
    // remainder by largest fractional part.
    for (c, r) in counts.iter_mut().zip(ratios) {
        if *r > 0.0 && *c == 0 {
            *c = 1;
        }
    }
    let mut assigned: usize = counts.iter().sum();
    if assigned > n {
        return Err(SynthError::InvalidArgument(
            "too few models for the requested split ratios".into(),
        ));
    }
    let mut order: Vec<usize> = (0..ratios.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = ratios[a] * n as f64 - (ratios[a] * n as f64).floor();
        let fb = ratios[b] * n as f64 - (ratios[b] * n as f64).floor();
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    let mut cursor = 0;
    while assigned < n {
        let idx = order[cursor % order.len()];
        if ratios[idx] > 0.0 {
            counts[idx] += 1;
            assigned += 1;
        }
        cursor += 1;
    }

    let mut out = Vec::with_capacity(ratios.len());
    let mut offset = 0;
    for c in counts {
        out.push(ids[offset..offset + c].to_vec());
        offset += c;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("m{i:03}")).collect()
    }

    #[test]
    fn paper_scale_counts() {
        let models = ids(272);
        let ratios = [220.0 / 272.0, 12.0 / 272.0, 40.0 / 272.0];
        let splits = split_models(&models, &ratios, 7).unwrap();
        assert_eq!(splits[0].len(), 220);
        assert_eq!(splits[1].len(), 12);
        assert_eq!(splits[2].len(), 40);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let models = ids(20);
        let ratios = [0.5, 0.25, 0.25];
        let a = split_models(&models, &ratios, 99).unwrap();
        let b = split_models(&models, &ratios, 99).unwrap();
        assert_eq!(a, b);
        let c = split_models(&models, &ratios, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn splits_are_disjoint_and_cover() {
        let models = ids(13);
        let splits = split_models(&models, &[0.6, 0.2, 0.2], 1).unwrap();
        let mut all: Vec<String> = splits.concat();
        all.sort();
        let mut want = models.clone();
        want.sort();
        assert_eq!(all, want);
    }

    #[test]
    fn too_few_models_errors() {
        assert!(split_models(&ids(2), &[0.4, 0.3, 0.3], 0).is_err());
    }

    #[test]
    fn bad_ratios_error() {
        assert!(split_models(&ids(5), &[0.5, 0.4], 0).is_err());
        assert!(split_models(&ids(5), &[], 0).is_err());
    }
}
