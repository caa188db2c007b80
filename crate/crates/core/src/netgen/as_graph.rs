//! Three-tier Internet autonomous-system generator (Elmokashfi, Kvalbein and
//! Dovrolis, 2010), following the parameterization used by NetworkX's
//! `random_internet_as_graph`.
//!
//! Recipe, for `n` vertices:
//!
//! 1. `n_t = min(n, round(4 + 2u))` tier-one (T) nodes form a clique and are
//!    present in all 5 regions.
//! 2. `round(0.15 n)` middle (M) nodes, then `round(0.05 n)` content providers
//!    (CP), then the remaining customers (C) are added one by one. Each picks
//!    one region (two with probability 0.2 for M, 0.05 for CP), draws a number
//!    of providers uniformly with mean `d_m = 2 + 2.5n/10^4`,
//!    `d_cp = 2 + 1.5n/10^4` or `d_c = 1 + 5n/10^5`, and links as a customer
//!    to T or M nodes of its regions by degree-preferential choice (T with
//!    probability 0.375 for M and CP, 0.125 for C).
//! 3. Peering links: M-M with mean `1 + 2n/10^4` per M node (preferential on
//!    peer degree), CP-M with mean `0.2 + 2n/10^4` and CP-CP with mean
//!    `0.05 + 2n/10^5` (uniform within the CP's regions). Peers never include
//!    the node's own customers or providers.
//!
//! Sets are ordered so the output is a pure function of the RNG stream.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const REGIONS: usize = 5;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Tier {
    T,
    M,
    Cp,
    C,
}

struct Builder<'r> {
    rng: &'r mut ChaCha8Rng,
    adj: Vec<BTreeSet<usize>>,
    tier: Vec<Tier>,
    peers: Vec<usize>,
    customers: Vec<BTreeSet<usize>>,
    providers: Vec<BTreeSet<usize>>,
    regions: Vec<BTreeSet<usize>>,
}

/// Integer with minimum `a` and mean `m`: `U{a..floor(b)}` plus a Bernoulli
/// correction, `b = 2m - a`.
fn uniform_int_from_avg(a: f64, m: f64, rng: &mut ChaCha8Rng) -> usize {
    let b = 2.0 * m - a;
    let p = (b - b.floor()) / 2.0;
    let x1 = (rng.random::<f64>() * (b.floor() - a) + a).round_ties_even();
    let x2 = if rng.random::<f64>() < p { 1.0 } else { 0.0 };
    (x1 + x2) as usize
}

/// Weighted choice; uniform when every weight is zero.
fn choose_weighted(items: &[(usize, usize)], rng: &mut ChaCha8Rng) -> Option<usize> {
    if items.is_empty() {
        return None;
    }
    let total: usize = items.iter().map(|&(_, w)| w).sum();
    if total == 0 {
        return items.choose(rng).map(|&(v, _)| v);
    }
    let target = rng.random::<f64>() * total as f64;
    let mut acc = 0.0;
    for &(v, w) in items {
        acc += w as f64;
        if target <= acc {
            return Some(v);
        }
    }
    items.last().map(|&(v, _)| v)
}

impl Builder<'_> {
    fn push_node(&mut self, tier: Tier) -> usize {
        self.adj.push(BTreeSet::new());
        self.tier.push(tier);
        self.peers.push(0);
        self.customers.push(BTreeSet::new());
        self.providers.push(BTreeSet::new());
        self.adj.len() - 1
    }

    fn link(&mut self, i: usize, j: usize) {
        self.adj[i].insert(j);
        self.adj[j].insert(i);
    }

    fn add_customer(&mut self, i: usize, j: usize) {
        self.customers[j].insert(i);
        self.providers[i].insert(j);
        let upstream: Vec<usize> = self.providers[j].iter().copied().collect();
        for z in upstream {
            self.customers[z].insert(i);
            self.providers[i].insert(z);
        }
    }

    fn of_tier(&self, set: &BTreeSet<usize>, tier: Tier) -> BTreeSet<usize> {
        set.iter().copied().filter(|&v| self.tier[v] == tier).collect()
    }

    fn pick_by_degree(&mut self, options: &BTreeSet<usize>) -> Option<usize> {
        let items: Vec<(usize, usize)> = options.iter().map(|&v| (v, self.adj[v].len())).collect();
        choose_weighted(&items, self.rng)
    }

    fn add_transit_node(&mut self, tier: Tier, two_region_prob: f64, avg_deg: f64, t_edge_prob: f64) {
        let i = self.push_node(tier);
        let regs = if self.rng.random::<f64>() < two_region_prob {
            2
        } else {
            1
        };
        let chosen: Vec<usize> = rand::seq::index::sample(self.rng, REGIONS, regs).into_vec();
        let mut options = BTreeSet::new();
        for r in chosen {
            options.extend(self.regions[r].iter().copied());
            self.regions[r].insert(i);
        }
        let edge_num = uniform_int_from_avg(1.0, avg_deg, self.rng);
        let mut t_options = self.of_tier(&options, Tier::T);
        let mut m_options = self.of_tier(&options, Tier::M);
        m_options.remove(&i);
        let mut d = 0;
        while d < edge_num && (!t_options.is_empty() || !m_options.is_empty()) {
            let use_t = m_options.is_empty() || (!t_options.is_empty() && self.rng.random::<f64>() < t_edge_prob);
            let j = if use_t {
                let j = self.pick_by_degree(&t_options).expect("non-empty");
                t_options.remove(&j);
                j
            } else {
                let j = self.pick_by_degree(&m_options).expect("non-empty");
                m_options.remove(&j);
                j
            };
            self.link(i, j);
            self.add_customer(i, j);
            d += 1;
        }
    }

    fn peer_candidates(&self, v: usize, mut options: BTreeSet<usize>) -> BTreeSet<usize> {
        options.remove(&v);
        options
            .retain(|w| !self.customers[v].contains(w) && !self.providers[v].contains(w) && !self.adj[v].contains(w));
        options
    }

    fn add_m_peering(&mut self, m: usize) {
        let all_m: BTreeSet<usize> = (0..self.tier.len()).filter(|&v| self.tier[v] == Tier::M).collect();
        let options = self.peer_candidates(m, all_m);
        let items: Vec<(usize, usize)> = options.iter().map(|&v| (v, self.peers[v])).collect();
        if let Some(j) = choose_weighted(&items, self.rng) {
            self.link(m, j);
            self.peers[m] += 1;
            self.peers[j] += 1;
        }
    }

    fn add_cp_peering(&mut self, cp: usize, to: Tier) {
        let mut local = BTreeSet::new();
        for region in &self.regions {
            if region.contains(&cp) {
                local.extend(region.iter().copied());
            }
        }
        let options = self.peer_candidates(cp, self.of_tier(&local, to));
        let options: Vec<usize> = options.into_iter().collect();
        if let Some(&j) = options.choose(self.rng) {
            self.link(cp, j);
            self.peers[cp] += 1;
            self.peers[j] += 1;
        }
    }
}

pub(super) fn internet_as(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    let nf = n as f64;
    let n_t = n.min((rng.random::<f64>() * 2.0 + 4.0).round_ties_even() as usize);
    let n_m = (0.15 * nf).round_ties_even() as usize;
    let n_cp = (0.05 * nf).round_ties_even() as usize;
    if n_t + n_m + n_cp > n {
        return Err(Error::InvalidTopology(format!(
            "internet AS model needs more vertices than n = {n}"
        )));
    }
    let n_c = n - n_t - n_m - n_cp;

    let d_m = 2.0 + 2.5 * nf / 10_000.0;
    let d_cp = 2.0 + 1.5 * nf / 10_000.0;
    let d_c = 1.0 + 5.0 * nf / 100_000.0;
    let p_m_m = 1.0 + 2.0 * nf / 10_000.0;
    let p_cp_m = 0.2 + 2.0 * nf / 10_000.0;
    let p_cp_cp = 0.05 + 2.0 * nf / 100_000.0;

    let mut b = Builder {
        rng,
        adj: Vec::with_capacity(n),
        tier: Vec::with_capacity(n),
        peers: Vec::with_capacity(n),
        customers: Vec::with_capacity(n),
        providers: Vec::with_capacity(n),
        regions: vec![BTreeSet::new(); REGIONS],
    };

    for i in 0..n_t {
        b.push_node(Tier::T);
        for region in b.regions.iter_mut() {
            region.insert(i);
        }
        for j in 0..i {
            b.link(i, j);
        }
    }
    for _ in 0..n_m {
        b.add_transit_node(Tier::M, 0.2, d_m, 0.375);
    }
    for _ in 0..n_cp {
        b.add_transit_node(Tier::Cp, 0.05, d_cp, 0.375);
    }
    for _ in 0..n_c {
        b.add_transit_node(Tier::C, 0.0, d_c, 0.125);
    }

    let ms: Vec<usize> = (0..n).filter(|&v| b.tier[v] == Tier::M).collect();
    let cps: Vec<usize> = (0..n).filter(|&v| b.tier[v] == Tier::Cp).collect();
    for &m in &ms {
        for _ in 0..uniform_int_from_avg(0.0, p_m_m, b.rng) {
            b.add_m_peering(m);
        }
    }
    for &cp in &cps {
        for _ in 0..uniform_int_from_avg(0.0, p_cp_m, b.rng) {
            b.add_cp_peering(cp, Tier::M);
        }
    }
    for &cp in &cps {
        for _ in 0..uniform_int_from_avg(0.0, p_cp_cp, b.rng) {
            b.add_cp_peering(cp, Tier::Cp);
        }
    }

    Ok(b.adj
        .iter()
        .enumerate()
        .flat_map(|(i, nb)| nb.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
        .collect())
}
