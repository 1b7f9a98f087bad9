//! Matrix completion inputs: MovieLens-style ratings files and synthetic
//! low-rank matrices.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use bpcg::objectives::MatrixCompletionLoss;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{BenchError, Result};

pub const DEFAULT_TOP: usize = 300;
pub const DEFAULT_OBSERVED_FRACTION: f64 = 0.3;

const MOVIELENS_HEADER: [&str; 4] = ["userId", "movieId", "rating", "timestamp"];

/// Ratings after id remapping. Users take indices `0..users`, items
/// `0..items`, both in increasing order of their original ids.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingsData {
    pub user_ids: Vec<u64>,
    pub item_ids: Vec<u64>,
    /// `(user index, item index, rating)`, sorted by user then item.
    pub ratings: Vec<(usize, usize, f64)>,
}

impl RatingsData {
    /// Side of the symmetric embedding: users first, then items.
    pub fn side(&self) -> usize {
        self.user_ids.len() + self.item_ids.len()
    }

    /// Each rating `r(u, i)` placed at `(u, users + i)` and its mirror, so the
    /// rectangular ratings matrix is the off-diagonal block of a symmetric one.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        let offset = self.user_ids.len();
        self.ratings
            .iter()
            .flat_map(|&(u, i, r)| [(u, offset + i, r), (offset + i, u, r)])
            .collect()
    }

    pub fn loss(&self) -> Result<MatrixCompletionLoss> {
        Ok(MatrixCompletionLoss::new(self.side(), self.entries())?)
    }

    /// Writes the ratings back in the input layout with original ids and a
    /// zero timestamp.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| BenchError::runtime(format!("writing ratings failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(MOVIELENS_HEADER).map_err(io)?;
        for &(u, i, r) in &self.ratings {
            w.write_record([
                self.user_ids[u].to_string(),
                self.item_ids[i].to_string(),
                r.to_string(),
                "0".to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| BenchError::runtime(format!("writing ratings failed: {e}")))
    }
}

pub fn ingest_movielens(path: &Path, top: usize) -> Result<RatingsData> {
    let file = File::open(path).map_err(|e| BenchError::config(format!("cannot open {}: {e}", path.display())))?;
    parse_movielens(file, top).map_err(|e| match e {
        BenchError::Configuration(msg) => BenchError::config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Parses `userId,movieId,rating,timestamp` rows. A repeated `(user, item)`
/// pair keeps the rating of its last row. Only the `top` users with the most
/// ratings and the `top` items with the most ratings are kept, ties going
/// to the smaller id.
pub fn parse_movielens<R: Read>(input: R, top: usize) -> Result<RatingsData> {
    if top == 0 {
        return Err(BenchError::config("top must be at least 1"));
    }
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(input);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(Ok(h)) => h,
        Some(Err(e)) => return Err(BenchError::config(format!("line 1: {e}"))),
        None => return Err(BenchError::config("line 1: empty file, expected a header")),
    };
    let fields: Vec<&str> = header.iter().map(str::trim).collect();
    if fields.len() < 3 || fields[..3] != MOVIELENS_HEADER[..3] || (fields.len() > 3 && fields[3..] != MOVIELENS_HEADER[3..])
    {
        return Err(BenchError::config(format!(
            "line 1: expected header {}, found {}",
            MOVIELENS_HEADER.join(","),
            fields.join(",")
        )));
    }

    let mut latest: HashMap<(u64, u64), f64> = HashMap::new();
    for (k, rec) in records.enumerate() {
        let line = k + 2;
        let rec = rec.map_err(|e| BenchError::config(format!("line {line}: {e}")))?;
        if rec.len() != fields.len() {
            return Err(BenchError::config(format!("line {line}: expected {} fields, found {}", fields.len(), rec.len())));
        }
        let user: u64 = parse_field(&rec[0], "userId", line)?;
        let item: u64 = parse_field(&rec[1], "movieId", line)?;
        let rating: f64 = parse_field(&rec[2], "rating", line)?;
        if !rating.is_finite() {
            return Err(BenchError::config(format!("line {line}: rating {rating} is not finite")));
        }
        latest.insert((user, item), rating);
    }

    let user_ids = most_frequent(latest.keys().map(|&(u, _)| u), top);
    let item_ids = most_frequent(latest.keys().map(|&(_, i)| i), top);
    let user_index: HashMap<u64, usize> = user_ids.iter().enumerate().map(|(k, &u)| (u, k)).collect();
    let item_index: HashMap<u64, usize> = item_ids.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut ratings: Vec<(usize, usize, f64)> = latest
        .iter()
        .filter_map(|(&(u, i), &r)| Some((*user_index.get(&u)?, *item_index.get(&i)?, r)))
        .collect();
    ratings.sort_by_key(|&(u, i, _)| (u, i));
    Ok(RatingsData { user_ids, item_ids, ratings })
}

fn parse_field<T: std::str::FromStr>(s: &str, name: &str, line: usize) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| BenchError::config(format!("line {line}: cannot parse {name} from {s:?}")))
}

/// The `top` most frequent ids, returned in increasing id order.
fn most_frequent(ids: impl Iterator<Item = u64>, top: usize) -> Vec<u64> {
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for id in ids {
        *counts.entry(id).or_default() += 1;
    }
    let mut ranked: Vec<(u64, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut kept: Vec<u64> = ranked.into_iter().take(top).map(|(id, _)| id).collect();
    kept.sort_unstable();
    kept
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticMatrix {
    pub n: usize,
    /// Row-major PSD matrix of unit trace.
    pub ground_truth: Vec<f64>,
    /// Observed `(row, col, target)` triples; both `(i, j)` and `(j, i)` are
    /// present with the same noisy target.
    pub entries: Vec<(usize, usize, f64)>,
}

impl SyntheticMatrix {
    pub fn loss(&self) -> Result<MatrixCompletionLoss> {
        Ok(MatrixCompletionLoss::new(self.n, self.entries.iter().copied())?)
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.ground_truth[i * self.n + i]).sum()
    }
}

/// Low-rank instance with 30% of the upper triangle observed.
pub fn synthetic_lowrank(n: usize, rank: usize, noise: f64, seed: u64) -> Result<SyntheticMatrix> {
    synthetic_lowrank_observed(n, rank, noise, DEFAULT_OBSERVED_FRACTION, seed)
}

/// `G = sum_k a_k v_k v_k^T` with unit Gaussian directions `v_k` and
/// Dirichlet(1) weights `a_k`, so `tr G = 1`. Each upper-triangle entry is
/// observed with probability `fraction`; observed targets get
/// `N(0, noise^2)` added.
pub fn synthetic_lowrank_observed(
    n: usize,
    rank: usize,
    noise: f64,
    fraction: f64,
    seed: u64,
) -> Result<SyntheticMatrix> {
    if n == 0 || rank == 0 || rank > n {
        return Err(BenchError::config(format!("need 1 <= rank <= n, got n={n} rank={rank}")));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(BenchError::config(format!("noise must be finite and non-negative, got {noise}")));
    }
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(BenchError::config(format!("observed fraction must lie in (0, 1], got {fraction}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..rank).map(|_| Exp1.sample(&mut rng)).collect();
    let total: f64 = raw.iter().sum();
    let mut ground_truth = vec![0.0; n * n];
    for a in raw {
        let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        let weight = a / total;
        for i in 0..n {
            for j in 0..n {
                ground_truth[i * n + j] += weight * v[i] * v[j];
            }
        }
    }
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i..n {
            if fraction < 1.0 && rng.random::<f64>() >= fraction {
                continue;
            }
            let eps: f64 = StandardNormal.sample(&mut rng);
            let target = ground_truth[i * n + j] + noise * eps;
            entries.push((i, j, target));
            if i != j {
                entries.push((j, i, target));
            }
        }
    }
    Ok(SyntheticMatrix { n, ground_truth, entries })
}
