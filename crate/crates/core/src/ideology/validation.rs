use super::{PropagationParams, Propagator, SeedLabels};
use crate::graph::RetweetGraph;
use crate::report::{fmt_f64, ratio};
use crate::{Error, Leaning, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashMap;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassScore {
    pub leaning: Leaning,
    pub support: u64,
    pub predicted: u64,
    pub correct: u64,
}

impl ClassScore {
    /// Zero when nothing was predicted for the class.
    pub fn precision(&self) -> f64 {
        ratio(self.correct, self.predicted).unwrap_or(0.0)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.correct, self.support).unwrap_or(0.0)
    }
}

/// Held-out scores of one fold. Held-out seeds that propagation never reached count
/// as wrong for recall and are not predictions for precision.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldScore {
    pub fold: usize,
    pub classes: [ClassScore; 2],
    pub held_out: u64,
    pub unreached: u64,
}

impl FoldScore {
    pub fn macro_precision(&self) -> f64 {
        (self.classes[0].precision() + self.classes[1].precision()) / 2.0
    }

    pub fn macro_recall(&self) -> f64 {
        (self.classes[0].recall() + self.classes[1].recall()) / 2.0
    }

    pub fn micro_precision(&self) -> f64 {
        let correct = self.classes[0].correct + self.classes[1].correct;
        let predicted = self.classes[0].predicted + self.classes[1].predicted;
        ratio(correct, predicted).unwrap_or(0.0)
    }

    pub fn micro_recall(&self) -> f64 {
        let correct = self.classes[0].correct + self.classes[1].correct;
        ratio(correct, self.held_out).unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PRReport {
    pub folds: Vec<FoldScore>,
}

impl PRReport {
    fn mean(&self, f: impl Fn(&FoldScore) -> f64) -> f64 {
        self.folds.iter().map(f).sum::<f64>() / self.folds.len() as f64
    }

    pub fn fold_count(&self) -> usize {
        self.folds.len()
    }

    pub fn mean_macro_precision(&self) -> f64 {
        self.mean(FoldScore::macro_precision)
    }

    pub fn mean_macro_recall(&self) -> f64 {
        self.mean(FoldScore::macro_recall)
    }

    pub fn mean_micro_precision(&self) -> f64 {
        self.mean(FoldScore::micro_precision)
    }

    pub fn mean_micro_recall(&self) -> f64 {
        self.mean(FoldScore::micro_recall)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "fold,held_out,unreached,macro_precision,macro_recall,micro_precision,micro_recall"
        )?;
        for f in &self.folds {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                f.fold,
                f.held_out,
                f.unreached,
                fmt_f64(f.macro_precision()),
                fmt_f64(f.macro_recall()),
                fmt_f64(f.micro_precision()),
                fmt_f64(f.micro_recall()),
            )?;
        }
        let held: u64 = self.folds.iter().map(|f| f.held_out).sum();
        let unreached: u64 = self.folds.iter().map(|f| f.unreached).sum();
        writeln!(
            w,
            "mean,{held},{unreached},{},{},{},{}",
            fmt_f64(self.mean_macro_precision()),
            fmt_f64(self.mean_macro_recall()),
            fmt_f64(self.mean_micro_precision()),
            fmt_f64(self.mean_micro_recall()),
        )
    }
}

/// Stratified k-fold validation of label propagation over the seed set.
///
/// Each leaning's seeds (sorted by id) are shuffled with `params.rng_seed` and dealt
/// round-robin into folds. Fold `i` clamps the other folds' seeds, propagates with
/// seed `params.rng_seed + i + 1`, and scores the held-out seeds. Folds run in
/// parallel; results do not depend on scheduling.
pub fn crossvalidate(
    graph: &RetweetGraph,
    seeds: &SeedLabels,
    folds: usize,
    params: PropagationParams,
) -> Result<PRReport> {
    if folds < 2 {
        return Err(Error::Config(format!("need at least 2 folds, got {folds}")));
    }
    let mut fold_of: HashMap<&str, usize> = HashMap::with_capacity(seeds.len());
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    for leaning in Leaning::BOTH {
        let mut members: Vec<&str> = seeds
            .iter()
            .filter(|(_, s)| s.leaning == leaning)
            .map(|(a, _)| a)
            .collect();
        if members.len() < folds {
            return Err(Error::InsufficientSeeds {
                class: leaning.to_string(),
                members: members.len(),
                folds,
            });
        }
        members.shuffle(&mut rng);
        for (i, a) in members.into_iter().enumerate() {
            fold_of.insert(a, i % folds);
        }
    }

    let propagator = Propagator::new(graph);
    let scores: Result<Vec<FoldScore>> = (0..folds)
        .into_par_iter()
        .map(|fold| {
            let train = seeds.filter(|a| fold_of[a] != fold);
            let fold_params = PropagationParams {
                max_iters: params.max_iters,
                rng_seed: params.rng_seed.wrapping_add(fold as u64 + 1),
            };
            let predicted = propagator.run(&train, fold_params)?;
            let mut classes = Leaning::BOTH.map(|leaning| ClassScore {
                leaning,
                support: 0,
                predicted: 0,
                correct: 0,
            });
            let (mut held_out, mut unreached) = (0, 0);
            for (a, s) in seeds.iter().filter(|(a, _)| fold_of[a] == fold) {
                held_out += 1;
                let truth = s.leaning as usize;
                classes[truth].support += 1;
                match predicted.leaning(a) {
                    Some(p) => {
                        classes[p as usize].predicted += 1;
                        if p == s.leaning {
                            classes[truth].correct += 1;
                        }
                    }
                    None => unreached += 1,
                }
            }
            Ok(FoldScore {
                fold,
                classes,
                held_out,
                unreached,
            })
        })
        .collect();
    Ok(PRReport { folds: scores? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cliques(size: usize) -> (RetweetGraph, SeedLabels) {
        let mut edges = Vec::new();
        for side in ["l", "c"] {
            for i in 0..size {
                for j in 0..size {
                    if i != j {
                        edges.push((format!("{side}{i:02}"), format!("{side}{j:02}"), 1));
                    }
                }
            }
        }
        let g = RetweetGraph::from_edges(Vec::<String>::new(), edges);
        let seeds = SeedLabels::from_counts(
            (0..size).flat_map(|i| [(format!("l{i:02}"), 2, 0), (format!("c{i:02}"), 0, 2)]),
        );
        (g, seeds)
    }

    #[test]
    fn homophilous_cliques_are_perfect() {
        let (g, seeds) = two_cliques(10);
        let report = crossvalidate(&g, &seeds, 5, PropagationParams::default()).unwrap();
        assert_eq!(report.fold_count(), 5);
        assert_eq!(report.mean_macro_precision(), 1.0);
        assert_eq!(report.mean_macro_recall(), 1.0);
        assert_eq!(report.mean_micro_recall(), 1.0);
        for f in &report.folds {
            assert_eq!(f.held_out, 4);
            assert_eq!(f.classes[0].support, 2); // stratified
        }
    }

    #[test]
    fn too_few_seeds_per_class() {
        let (g, seeds) = two_cliques(4);
        assert!(matches!(
            crossvalidate(&g, &seeds, 5, PropagationParams::default()),
            Err(Error::InsufficientSeeds { members: 4, folds: 5, .. })
        ));
    }

    #[test]
    fn mean_is_fold_average() {
        let (g, seeds) = two_cliques(6);
        let r = crossvalidate(&g, &seeds, 3, PropagationParams::default()).unwrap();
        let avg = r.folds.iter().map(|f| f.macro_precision()).sum::<f64>() / 3.0;
        assert_eq!(r.mean_macro_precision(), avg);
        assert_eq!(crossvalidate(&g, &seeds, 3, PropagationParams::default()).unwrap(), r);
    }

    #[test]
    fn unreached_seeds_hurt_recall_not_precision() {
        let (g, mut_seeds) = two_cliques(5);
        // add isolated seeds, unknown to the graph
        let mut counts: Vec<(String, u64, u64)> = mut_seeds
            .iter()
            .map(|(a, s)| (a.to_string(), s.n_liberal, s.n_conservative))
            .collect();
        for i in 0..5 {
            counts.push((format!("zz{i}"), 1, 0));
        }
        let seeds = SeedLabels::from_counts(counts);
        let r = crossvalidate(&g, &seeds, 5, PropagationParams::default()).unwrap();
        assert_eq!(r.mean_micro_precision(), 1.0);
        assert!(r.mean_micro_recall() < 1.0);
        assert_eq!(r.folds.iter().map(|f| f.unreached).sum::<u64>(), 5);
    }
}
