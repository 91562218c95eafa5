//! 3-dimensional matching instances and E3P3-SAT formulas: validation,
//! text formats, brute-force solvers, and seeded generators.
//!
//! Indexing is 1-based throughout (element a of part α is written
//! `(α, a)` with a in 1..=n), matching the usual notation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("instance exceeds brute-force cap: {0}")]
    CapExceeded(String),
    #[error("no unsolvable instance found for n={0} within the sampling budget")]
    GenerationBudget(u32),
}

fn invalid(msg: impl Into<String>) -> InstanceError {
    InstanceError::Invalid(msg.into())
}

/// Exact-cover instance over the universe {α,β,γ} × [n]: a family of m
/// triples; a solution is n of them covering every element exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeDmInstance {
    n: u32,
    sets: Vec<[u32; 3]>,
}

pub const THREE_DM_CAP_N: u32 = 6;
pub const THREE_DM_CAP_M: usize = 20;

impl ThreeDmInstance {
    pub fn new(n: u32, sets: Vec<[u32; 3]>) -> Result<Self, InstanceError> {
        if n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        if sets.is_empty() {
            return Err(invalid("the set family must be nonempty"));
        }
        for (i, s) in sets.iter().enumerate() {
            if s.iter().any(|&c| c == 0 || c > n) {
                return Err(invalid(format!(
                    "set {} = ({}, {}, {}) has a coordinate outside 1..={}",
                    i + 1,
                    s[0],
                    s[1],
                    s[2],
                    n
                )));
            }
        }
        Ok(ThreeDmInstance { n, sets })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[[u32; 3]] {
        &self.sets
    }

    /// 1-based accessor.
    pub fn set(&self, j: u32) -> Option<[u32; 3]> {
        self.sets.get(j as usize - 1).copied()
    }

    /// Does the 1-based index list form an exact cover?
    pub fn is_exact_cover(&self, chosen: &[u32]) -> bool {
        if chosen.len() != self.n as usize {
            return false;
        }
        let mut seen = vec![false; 3 * self.n as usize];
        for &j in chosen {
            let Some(s) = self.set(j) else { return false };
            for (part, &a) in s.iter().enumerate() {
                let slot = part * self.n as usize + (a as usize - 1);
                if seen[slot] {
                    return false;
                }
                seen[slot] = true;
            }
        }
        seen.iter().all(|&b| b)
    }
}

/// Some exact cover as sorted 1-based set indices, or None. Backtracking
/// over the lowest uncovered element; deterministic for a given instance.
pub fn solve_3dm_bruteforce(inst: &ThreeDmInstance) -> Result<Option<Vec<u32>>, InstanceError> {
    if inst.n > THREE_DM_CAP_N {
        return Err(InstanceError::CapExceeded(format!(
            "n={} over cap {}",
            inst.n, THREE_DM_CAP_N
        )));
    }
    if inst.m() > THREE_DM_CAP_M {
        return Err(InstanceError::CapExceeded(format!(
            "m={} over cap {}",
            inst.m(),
            THREE_DM_CAP_M
        )));
    }
    let n = inst.n as usize;
    let mut covered = vec![false; 3 * n];
    let mut chosen = Vec::with_capacity(n);
    // branch on the lowest uncovered element; restricting later picks to
    // higher indices would be unsound here because the element order, not
    // the index order, drives the recursion
    fn rec_any(inst: &ThreeDmInstance, covered: &mut [bool], chosen: &mut Vec<u32>) -> bool {
        let n = inst.n as usize;
        let Some(slot) = covered.iter().position(|&c| !c) else {
            return true;
        };
        let part = slot / n;
        let elem = (slot % n + 1) as u32;
        for j in 0..inst.m() {
            if chosen.contains(&(j as u32 + 1)) {
                continue;
            }
            let s = inst.sets[j];
            if s[part] != elem {
                continue;
            }
            let slots = [
                s[0] as usize - 1,
                n + s[1] as usize - 1,
                2 * n + s[2] as usize - 1,
            ];
            if slots.iter().any(|&sl| covered[sl]) {
                continue;
            }
            for &sl in &slots {
                covered[sl] = true;
            }
            chosen.push(j as u32 + 1);
            if rec_any(inst, covered, chosen) {
                return true;
            }
            chosen.pop();
            for &sl in &slots {
                covered[sl] = false;
            }
        }
        false
    }
    if rec_any(inst, &mut covered, &mut chosen) {
        chosen.sort_unstable();
        Ok(Some(chosen))
    } else {
        Ok(None)
    }
}

/// Instance with a planted exact cover: one triple per i from three
/// seeded permutations, plus m - n uniform distractors, shuffled.
pub fn gen_planted_3dm(n: u32, m: usize, seed: u64) -> Result<ThreeDmInstance, InstanceError> {
    if m < n as usize {
        return Err(invalid(format!("m={m} cannot host a planted cover for n={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = Vec::with_capacity(m);
    let perms: Vec<Vec<u32>> = (0..3).map(|_| permutation(n, &mut rng)).collect();
    for i in 0..n as usize {
        sets.push([perms[0][i], perms[1][i], perms[2][i]]);
    }
    for _ in n as usize..m {
        sets.push([
            rng.gen_range(1..=n),
            rng.gen_range(1..=n),
            rng.gen_range(1..=n),
        ]);
    }
    // Fisher-Yates so the planted triples don't sit at the front
    for i in (1..sets.len()).rev() {
        let j = rng.gen_range(0..=i);
        sets.swap(i, j);
    }
    ThreeDmInstance::new(n, sets)
}

fn permutation(n: u32, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut p: Vec<u32> = (1..=n).collect();
    for i in (1..p.len()).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// Instance certified to have no exact cover, by rejection sampling
/// against the brute-force solver. n = 1 admits no such instance (the
/// only possible triple is itself a cover), so the budget runs out.
pub fn gen_no_3dm(n: u32, seed: u64) -> Result<ThreeDmInstance, InstanceError> {
    if n > THREE_DM_CAP_N {
        return Err(InstanceError::CapExceeded(format!(
            "n={n} over oracle cap {THREE_DM_CAP_N}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const BUDGET: usize = 10_000;
    for _ in 0..BUDGET {
        let m = rng.gen_range(n as usize..=n as usize + 2);
        let sets: Vec<[u32; 3]> = (0..m)
            .map(|_| {
                [
                    rng.gen_range(1..=n),
                    rng.gen_range(1..=n),
                    rng.gen_range(1..=n),
                ]
            })
            .collect();
        let inst = ThreeDmInstance::new(n, sets)?;
        if solve_3dm_bruteforce(&inst)?.is_none() {
            return Ok(inst);
        }
    }
    Err(InstanceError::GenerationBudget(n))
}

pub fn format_3dm(inst: &ThreeDmInstance) -> String {
    let mut out = format!("3dm {} {}\n", inst.n, inst.m());
    for s in &inst.sets {
        out.push_str(&format!("{} {} {}\n", s[0], s[1], s[2]));
    }
    out
}

pub fn parse_3dm(text: &str) -> Result<ThreeDmInstance, InstanceError> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines
        .next()
        .ok_or(InstanceError::Parse { line: 0, msg: "empty input".into() })?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("3dm") {
        return Err(InstanceError::Parse {
            line: line_no,
            msg: "expected `3dm <n> <m>` header".into(),
        });
    }
    let n: u32 = parse_field(parts.next(), line_no, "n")?;
    let m: usize = parse_field(parts.next(), line_no, "m")?;
    let mut sets = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = lines.next().ok_or(InstanceError::Parse {
            line: 0,
            msg: format!("expected {m} set lines"),
        })?;
        let coords: Vec<u32> = line
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| InstanceError::Parse {
                    line: line_no,
                    msg: format!("bad coordinate `{t}`"),
                })
            })
            .collect::<Result<_, _>>()?;
        if coords.len() != 3 {
            return Err(InstanceError::Parse {
                line: line_no,
                msg: "each set line needs exactly 3 coordinates".into(),
            });
        }
        sets.push([coords[0], coords[1], coords[2]]);
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(InstanceError::Parse {
            line: line_no,
            msg: "trailing content after the declared sets".into(),
        });
    }
    ThreeDmInstance::new(n, sets)
}

/// Exactly-3, parts-3 SAT: every clause holds one literal from each of
/// the α, β, γ variable groups (by position), polarity by sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E3p3Formula {
    n: u32,
    clauses: Vec<[i32; 3]>,
}

pub const SAT_CAP_VARS: u32 = 8; // 3n <= 24 assignment bits

impl E3p3Formula {
    pub fn new(n: u32, clauses: Vec<[i32; 3]>) -> Result<Self, InstanceError> {
        if n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        for (q, c) in clauses.iter().enumerate() {
            for &lit in c {
                if lit == 0 || lit.unsigned_abs() > n {
                    return Err(invalid(format!(
                        "clause {} literal {lit} outside ±1..=±{n}",
                        q + 1
                    )));
                }
            }
        }
        Ok(E3p3Formula { n, clauses })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }
}

/// One boolean per variable of each part, 1-based variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub alpha: Vec<bool>,
    pub beta: Vec<bool>,
    pub gamma: Vec<bool>,
}

impl Assignment {
    pub fn part(&self, part: usize) -> &[bool] {
        match part {
            0 => &self.alpha,
            1 => &self.beta,
            2 => &self.gamma,
            _ => panic!("part index out of range"),
        }
    }

    pub fn satisfies(&self, f: &E3p3Formula) -> bool {
        f.clauses.iter().all(|c| {
            c.iter().enumerate().any(|(part, &lit)| {
                let value = self.part(part)[lit.unsigned_abs() as usize - 1];
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    }
}

/// First satisfying assignment in lexicographic order (all-false first,
/// α block least significant), or None. An empty clause list is
/// vacuously satisfiable.
pub fn solve_sat_bruteforce(f: &E3p3Formula) -> Result<Option<Assignment>, InstanceError> {
    if f.n > SAT_CAP_VARS {
        return Err(InstanceError::CapExceeded(format!(
            "n={} over cap {} (3n assignment bits)",
            f.n, SAT_CAP_VARS
        )));
    }
    let n = f.n as usize;
    for mask in 0u64..(1u64 << (3 * n)) {
        let bit = |i: usize| mask >> i & 1 == 1;
        let asg = Assignment {
            alpha: (0..n).map(bit).collect(),
            beta: (n..2 * n).map(bit).collect(),
            gamma: (2 * n..3 * n).map(bit).collect(),
        };
        if asg.satisfies(f) {
            return Ok(Some(asg));
        }
    }
    Ok(None)
}

/// Uniform random clause set, deterministic under the seed.
pub fn gen_random_e3p3(n: u32, m: usize, seed: u64) -> Result<E3p3Formula, InstanceError> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..m)
        .map(|_| {
            let mut c = [0i32; 3];
            for slot in &mut c {
                let var = rng.gen_range(1..=n) as i32;
                *slot = if rng.gen_bool(0.5) { var } else { -var };
            }
            c
        })
        .collect();
    E3p3Formula::new(n, clauses)
}

pub fn format_e3p3(f: &E3p3Formula) -> String {
    let mut out = format!("e3p3 {} {}\n", f.n, f.m());
    for c in &f.clauses {
        out.push_str(&format!("{} {} {}\n", c[0], c[1], c[2]));
    }
    out
}

pub fn parse_e3p3(text: &str) -> Result<E3p3Formula, InstanceError> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines
        .next()
        .ok_or(InstanceError::Parse { line: 0, msg: "empty input".into() })?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("e3p3") {
        return Err(InstanceError::Parse {
            line: line_no,
            msg: "expected `e3p3 <n> <m>` header".into(),
        });
    }
    let n: u32 = parse_field(parts.next(), line_no, "n")?;
    let m: usize = parse_field(parts.next(), line_no, "m")?;
    let mut clauses = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = lines.next().ok_or(InstanceError::Parse {
            line: 0,
            msg: format!("expected {m} clause lines"),
        })?;
        let lits: Vec<i32> = line
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| InstanceError::Parse {
                    line: line_no,
                    msg: format!("bad literal `{t}`"),
                })
            })
            .collect::<Result<_, _>>()?;
        if lits.len() != 3 {
            return Err(InstanceError::Parse {
                line: line_no,
                msg: "each clause line needs exactly 3 literals".into(),
            });
        }
        clauses.push([lits[0], lits[1], lits[2]]);
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(InstanceError::Parse {
            line: line_no,
            msg: "trailing content after the declared clauses".into(),
        });
    }
    E3p3Formula::new(n, clauses)
}

/// Non-blank, non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_field<T: std::str::FromStr>(
    tok: Option<&str>,
    line: usize,
    name: &str,
) -> Result<T, InstanceError> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| InstanceError::Parse {
            line,
            msg: format!("missing or malformed `{name}`"),
        })
}
