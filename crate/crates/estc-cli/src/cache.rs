//! Content-addressed branch cache.
//!
//! Solutions are keyed by the exact bit patterns of (omega, am, g_max, q1)
//! plus the branch label and stored as JSON; binary64 values survive the
//! round trip bit-for-bit, so cache hits are indistinguishable from fresh
//! solves.

use anyhow::{Context, Result};
use estc_core::dispersion::{solve_branch, BranchPair, DispersionBranch, SolverParams};
use estc_core::evolution::Branch;
use std::path::PathBuf;

#[derive(Debug, Clone)]
pub struct SolutionCache {
    dir: PathBuf,
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325_u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

impl SolutionCache {
    pub fn new(dir: PathBuf) -> Result<Self> {
        std::fs::create_dir_all(&dir)
            .with_context(|| format!("creating cache directory {}", dir.display()))?;
        Ok(Self { dir })
    }

    fn path(&self, params: &SolverParams, q1: f64, j: Branch) -> PathBuf {
        let mut bytes = Vec::with_capacity(33);
        bytes.extend_from_slice(&params.omega.to_bits().to_le_bytes());
        bytes.extend_from_slice(&params.am.to_bits().to_le_bytes());
        bytes.extend_from_slice(&(params.g_max as u64).to_le_bytes());
        bytes.extend_from_slice(&q1.to_bits().to_le_bytes());
        bytes.push(j.index() as u8);
        self.dir.join(format!("branch-{:016x}.json", fnv1a(&bytes)))
    }

    pub fn load(&self, params: &SolverParams, q1: f64, j: Branch) -> Option<DispersionBranch> {
        let text = std::fs::read_to_string(self.path(params, q1, j)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn store(
        &self,
        params: &SolverParams,
        q1: f64,
        branch: &DispersionBranch,
    ) -> Result<()> {
        let path = self.path(params, q1, branch.j);
        let text = serde_json::to_string(branch).context("serializing branch")?;
        std::fs::write(&path, text)
            .with_context(|| format!("writing cache entry {}", path.display()))?;
        Ok(())
    }
}

/// Solves both branches at q1, going through the cache when one is given.
pub fn solve_pair_cached(
    q1: f64,
    params: &SolverParams,
    cache: Option<&SolutionCache>,
) -> Result<BranchPair> {
    let mut solved = Vec::with_capacity(2);
    for j in Branch::BOTH {
        let branch = match cache.and_then(|c| c.load(params, q1, j)) {
            Some(hit) => hit,
            None => {
                let fresh = solve_branch(j, q1, params)?;
                if let Some(c) = cache {
                    c.store(params, q1, &fresh)?;
                }
                fresh
            }
        };
        solved.push(branch);
    }
    let b = solved.pop().unwrap();
    let a = solved.pop().unwrap();
    Ok(if b.xi < a.xi {
        BranchPair { b1: b, b2: a }
    } else {
        BranchPair { b1: a, b2: b }
    })
}
