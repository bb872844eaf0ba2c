//! Brute-force partition enumeration and the crank/rank statistics.

use serde::Serialize;
use thiserror::Error;

/// Largest `n` enumerated without an explicit override.
pub const ENUMERATION_GUARD: u32 = 70;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("n = {n} exceeds the enumeration guard {guard}; pass the override to continue")]
    ResourceLimit { n: u32, guard: u32 },
    #[error("crank and rank are undefined for the empty partition")]
    EmptyPartition,
    #[error("unsupported modulus or kind: {0}")]
    Unsupported(String),
}

fn check_guard(n: u32, allow_large: bool) -> Result<(), PartitionError> {
    if n > ENUMERATION_GUARD && !allow_large {
        return Err(PartitionError::ResourceLimit {
            n,
            guard: ENUMERATION_GUARD,
        });
    }
    Ok(())
}

/// Calls `f` on every partition of `n` as a non-increasing slice.
pub fn for_each_partition(n: u32, allow_large: bool, mut f: impl FnMut(&[u32])) -> Result<(), PartitionError> {
    check_guard(n, allow_large)?;
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if rem == 0 {
            f(cur);
            return;
        }
        for part in (1..=max.min(rem)).rev() {
            cur.push(part);
            rec(rem - part, part, cur, f);
            cur.pop();
        }
    }
    let mut cur = Vec::new();
    rec(n, n, &mut cur, &mut f);
    Ok(())
}

pub fn enumerate(n: u32, allow_large: bool) -> Result<Vec<Vec<u32>>, PartitionError> {
    let mut out = Vec::new();
    for_each_partition(n, allow_large, |p| out.push(p.to_vec()))?;
    Ok(out)
}

/// Number of ones.
pub fn omega(p: &[u32]) -> u32 {
    p.iter().rev().take_while(|&&x| x == 1).count() as u32
}

pub fn crank(p: &[u32]) -> Result<i64, PartitionError> {
    if p.is_empty() {
        return Err(PartitionError::EmptyPartition);
    }
    let w = omega(p);
    if w == 0 {
        return Ok(p[0] as i64);
    }
    let mu = p.iter().filter(|&&x| x > w).count() as i64;
    Ok(mu - w as i64)
}

pub fn rank(p: &[u32]) -> Result<i64, PartitionError> {
    if p.is_empty() {
        return Err(PartitionError::EmptyPartition);
    }
    Ok(p[0] as i64 - p.len() as i64)
}

/// Residue tables of one `n` modulo `m`. For `n = 0` the crank and rank
/// tables are empty because the empty partition has neither statistic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionStats {
    pub n: u32,
    pub m: u32,
    pub p: u64,
    pub crank_count: Vec<u64>,
    pub rank_count: Vec<u64>,
    pub ones_by_crank: Vec<u64>,
    pub parts_by_rank: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatsRow {
    pub n: u32,
    pub m: u32,
    pub class: u32,
    #[serde(rename = "M")]
    pub crank_count: u64,
    #[serde(rename = "N")]
    pub rank_count: u64,
    #[serde(rename = "M_omega")]
    pub ones_by_crank: u64,
    #[serde(rename = "NT")]
    pub parts_by_rank: u64,
}

impl PartitionStats {
    /// `M(r,m,n)`.
    pub fn crank_class(&self, r: i64) -> u64 {
        self.crank_count.get(r.rem_euclid(self.m as i64) as usize).copied().unwrap_or(0)
    }

    /// `M_ω(r,m,n)`.
    pub fn m_omega(&self, r: i64) -> u64 {
        self.ones_by_crank.get(r.rem_euclid(self.m as i64) as usize).copied().unwrap_or(0)
    }

    /// `NT(r,m,n)`.
    pub fn nt(&self, r: i64) -> u64 {
        self.parts_by_rank.get(r.rem_euclid(self.m as i64) as usize).copied().unwrap_or(0)
    }

    /// `N(r,m,n)`.
    pub fn rank_class(&self, r: i64) -> u64 {
        self.rank_count.get(r.rem_euclid(self.m as i64) as usize).copied().unwrap_or(0)
    }

    pub fn rows(&self) -> Vec<StatsRow> {
        (0..self.crank_count.len())
            .map(|r| StatsRow {
                n: self.n,
                m: self.m,
                class: r as u32,
                crank_count: self.crank_count[r],
                rank_count: self.rank_count[r],
                ones_by_crank: self.ones_by_crank[r],
                parts_by_rank: self.parts_by_rank[r],
            })
            .collect()
    }
}

pub fn stats_table(n: u32, m: u32, allow_large: bool) -> Result<PartitionStats, PartitionError> {
    if m == 0 {
        return Err(PartitionError::Unsupported("modulus 0".into()));
    }
    let len = if n == 0 { 0 } else { m as usize };
    let mut st = PartitionStats {
        n,
        m,
        p: 0,
        crank_count: vec![0; len],
        rank_count: vec![0; len],
        ones_by_crank: vec![0; len],
        parts_by_rank: vec![0; len],
    };
    let mm = m as i64;
    for_each_partition(n, allow_large, |p| {
        st.p += 1;
        if p.is_empty() {
            return;
        }
        let c = crank(p).expect("nonempty").rem_euclid(mm) as usize;
        let r = rank(p).expect("nonempty").rem_euclid(mm) as usize;
        st.crank_count[c] += 1;
        st.ones_by_crank[c] += omega(p) as u64;
        st.rank_count[r] += 1;
        st.parts_by_rank[r] += p.len() as u64;
    })?;
    Ok(st)
}

/// `Σ_{r=1}^{(m-1)/2} w(r) [M_ω(r,m,n) - M_ω(m-r,m,n)]`.
pub fn weighted_omega_difference(st: &PartitionStats, weights: &[i64]) -> i64 {
    weights
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let r = i as i64 + 1;
            w * (st.m_omega(r) as i64 - st.m_omega(st.m as i64 - r) as i64)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CongruenceKind {
    /// `Σ_{m=1}^{4} m NT(m,5,5n+t) ≡ 0 (mod 5)` for `t ∈ {1, 4}`.
    AndrewsBeck { t: u32 },
    /// `Σ_{m=1}^{4} m M_ω(m,5,5n+4) ≡ 0 (mod 5)`.
    OnesCrankMod5,
    /// `Σ_{m=1}^{(p-1)/2} m [M_ω(m,p,pn-δ_p) - M_ω(p-m,p,pn-δ_p)] = 0`, `δ_p = (p²-1)/24`.
    DeltaIdentity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceRow {
    pub n: u32,
    pub argument: u32,
    pub value: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub kind: CongruenceKind,
    pub p: u32,
    pub rows: Vec<CongruenceRow>,
}

impl CongruenceReport {
    pub fn all_hold(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.holds)
    }
}

/// Evaluates a congruence or identity for every `n` whose argument is at
/// most `limit` (which must respect the enumeration guard).
pub fn beck_congruence_check(kind: CongruenceKind, p: u32, limit: u32) -> Result<CongruenceReport, PartitionError> {
    check_guard(limit, false)?;
    let mut rows = Vec::new();
    match kind {
        CongruenceKind::AndrewsBeck { t } => {
            if p != 5 || !(t == 1 || t == 4) {
                return Err(PartitionError::Unsupported(format!("Andrews-Beck with p={p}, t={t}")));
            }
            let mut n = 0;
            while 5 * n + t <= limit {
                let st = stats_table(5 * n + t, 5, false)?;
                let v: i64 = (1..=4).map(|r| r * st.nt(r) as i64).sum();
                rows.push(CongruenceRow { n, argument: 5 * n + t, value: v, holds: v % 5 == 0 });
                n += 1;
            }
        }
        CongruenceKind::OnesCrankMod5 => {
            if p != 5 {
                return Err(PartitionError::Unsupported(format!("ones/crank with p={p}")));
            }
            let mut n = 0;
            while 5 * n + 4 <= limit {
                let st = stats_table(5 * n + 4, 5, false)?;
                let v: i64 = (1..=4).map(|r| r * st.m_omega(r) as i64).sum();
                rows.push(CongruenceRow { n, argument: 5 * n + 4, value: v, holds: v % 5 == 0 });
                n += 1;
            }
        }
        CongruenceKind::DeltaIdentity => {
            if ![5, 7, 11].contains(&p) {
                return Err(PartitionError::Unsupported(format!("δ identity with p={p}")));
            }
            let delta = (p * p - 1) / 24;
            let weights: Vec<i64> = (1..=((p - 1) / 2) as i64).collect();
            let mut n = 1;
            while p * n - delta <= limit {
                let arg = p * n - delta;
                let st = stats_table(arg, p, false)?;
                let v = weighted_omega_difference(&st, &weights);
                rows.push(CongruenceRow { n, argument: arg, value: v, holds: v == 0 });
                n += 1;
            }
        }
    }
    Ok(CongruenceReport { kind, p, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(enumerate(4, false).unwrap().len(), 5);
        assert_eq!(enumerate(0, false).unwrap(), vec![Vec::<u32>::new()]);
        assert_eq!(enumerate(6, false).unwrap().len(), 11);
        assert!(matches!(enumerate(71, false), Err(PartitionError::ResourceLimit { n: 71, .. })));
    }

    #[test]
    fn crank_examples() {
        assert_eq!(crank(&[4]).unwrap(), 4);
        assert_eq!(crank(&[1]).unwrap(), -1);
        assert_eq!(crank(&[4, 1, 1]).unwrap(), -1);
        assert_eq!(crank(&[]), Err(PartitionError::EmptyPartition));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&[4]).unwrap(), 3);
        assert_eq!(rank(&[2, 2]).unwrap(), 0);
        assert_eq!(rank(&[3, 1]).unwrap(), 1);
    }

    #[test]
    fn stats_n6() {
        let st = stats_table(6, 11, false).unwrap();
        assert!(st.crank_count.iter().all(|&c| c == 1));
        assert_eq!(st.ones_by_crank.iter().sum::<u64>(), 19);
    }

    #[test]
    fn stats_n1() {
        let st = stats_table(1, 11, false).unwrap();
        for r in 0..11 {
            assert_eq!(st.m_omega(r), if r == 10 { 1 } else { 0 });
        }
    }

    #[test]
    fn empty_partition_table() {
        let st = stats_table(0, 11, false).unwrap();
        assert_eq!(st.p, 1);
        assert!(st.rows().is_empty());
    }
}
