use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rand::distr::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::Result;

use super::config::{SimConfig, VictimPolicy};

/// Per-class outcome counts of the customers that arrived after warm-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassCounts {
    pub arrivals: u64,
    pub blocked_on_arrival: u64,
    pub preempted: u64,
    pub completed: u64,
    pub in_system_at_end: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplicationCounts {
    pub per_class: Vec<ClassCounts>,
    /// Arrivals plus departures processed, warm-up included.
    pub events: u64,
}

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replication `index`: `seed ⊕ splitmix64(index)`, fed to
/// `ChaCha12Rng::seed_from_u64`.
pub fn replication_seed(seed: u64, index: u64) -> u64 {
    seed ^ splitmix64(index)
}

#[derive(Debug, Clone, Copy)]
struct Job {
    class: usize,
    start: f64,
    counted: bool,
}

#[derive(Debug, Clone, Copy)]
struct Departure {
    time: f64,
    slot: usize,
    generation: u64,
}

impl PartialEq for Departure {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Departure {}

impl PartialOrd for Departure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Departure {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.slot.cmp(&other.slot))
            .then(self.generation.cmp(&other.generation))
    }
}

/// Server pool. Departures of displaced customers stay in the heap and are
/// discarded on pop by their stale generation.
struct Servers {
    jobs: Vec<Option<Job>>,
    generation: Vec<u64>,
    free: Vec<usize>,
    members: Vec<Vec<usize>>,
    member_pos: Vec<usize>,
    departures: BinaryHeap<Reverse<Departure>>,
}

impl Servers {
    fn new(servers: usize, classes: usize) -> Self {
        Servers {
            jobs: vec![None; servers],
            generation: vec![0; servers],
            free: (0..servers).rev().collect(),
            members: vec![Vec::new(); classes],
            member_pos: vec![0; servers],
            departures: BinaryHeap::with_capacity(2 * servers),
        }
    }

    fn admit(&mut self, slot: usize, job: Job, end: f64) {
        self.generation[slot] += 1;
        self.jobs[slot] = Some(job);
        self.member_pos[slot] = self.members[job.class].len();
        self.members[job.class].push(slot);
        self.departures.push(Reverse(Departure {
            time: end,
            slot,
            generation: self.generation[slot],
        }));
    }

    fn release(&mut self, slot: usize) -> Job {
        let job = self.jobs[slot].take().expect("releasing an idle server");
        let list = &mut self.members[job.class];
        let pos = self.member_pos[slot];
        list.swap_remove(pos);
        if let Some(&moved) = list.get(pos) {
            self.member_pos[moved] = pos;
        }
        self.free.push(slot);
        job
    }

    fn lowest_occupied(&self) -> Option<usize> {
        self.members.iter().rposition(|m| !m.is_empty())
    }

    /// Pops the next live departure no later than `horizon`.
    fn next_departure(&mut self, horizon: f64) -> Option<usize> {
        while let Some(Reverse(d)) = self.departures.peek().copied() {
            if d.time > horizon {
                return None;
            }
            self.departures.pop();
            if self.generation[d.slot] == d.generation && self.jobs[d.slot].is_some() {
                return Some(d.slot);
            }
        }
        None
    }
}

/// Simulates one replication and returns the per-class outcome counts.
///
/// The output depends only on `(config, replication_index)`.
pub fn run_replication(config: &SimConfig, replication_index: u64) -> Result<ReplicationCounts> {
    config.validate()?;
    let params = &config.params;
    let classes = params.classes();
    let rates = params.arrival_rates();
    let total_rate = params.total_arrival_rate();
    let cumulative: Vec<f64> = rates
        .iter()
        .scan(0.0, |acc, r| {
            *acc += r;
            Some(*acc)
        })
        .collect();
    let dist = config.distribution;
    let warmup = config.warmup_arrivals();

    let mut rng = ChaCha12Rng::seed_from_u64(replication_seed(config.seed, replication_index));
    let mut servers = Servers::new(params.servers(), classes);
    let mut counts = vec![ClassCounts::default(); classes];
    let mut events = 0u64;
    let mut now = 0.0;

    for arrival in 0..config.arrivals_per_replication {
        let gap: f64 = Open01.sample(&mut rng);
        let next_arrival = now - gap.ln() / total_rate;

        while let Some(slot) = servers.next_departure(next_arrival) {
            let job = servers.release(slot);
            if job.counted {
                counts[job.class].completed += 1;
            }
            events += 1;
        }
        now = next_arrival;
        events += 1;

        let pick = rng.random::<f64>() * total_rate;
        let class = cumulative
            .iter()
            .position(|&c| pick < c)
            .unwrap_or(classes - 1);
        let counted = arrival >= warmup;
        if counted {
            counts[class].arrivals += 1;
        }

        let slot = match servers.free.pop() {
            Some(slot) => slot,
            None => match servers.lowest_occupied() {
                Some(lowest) if lowest > class => {
                    let members = &servers.members[lowest];
                    let victim = match config.victim_policy {
                        VictimPolicy::RandomWithinClass => members[rng.random_range(0..members.len())],
                        VictimPolicy::NewestInService => pick_by_start(&servers, lowest, |a, b| a > b),
                        VictimPolicy::OldestInService => pick_by_start(&servers, lowest, |a, b| a < b),
                    };
                    let displaced = servers.release(victim);
                    if displaced.counted {
                        counts[lowest].preempted += 1;
                    }
                    servers.free.pop().expect("slot freed by preemption")
                }
                _ => {
                    if counted {
                        counts[class].blocked_on_arrival += 1;
                    }
                    continue;
                }
            },
        };
        let u: f64 = Open01.sample(&mut rng);
        let job = Job {
            class,
            start: now,
            counted,
        };
        servers.admit(slot, job, now + dist.sample_unchecked(u));
    }

    for job in servers.jobs.iter().flatten() {
        if job.counted {
            counts[job.class].in_system_at_end += 1;
        }
    }

    Ok(ReplicationCounts {
        per_class: counts,
        events,
    })
}

fn pick_by_start(servers: &Servers, class: usize, better: impl Fn(f64, f64) -> bool) -> usize {
    let start = |slot: usize| servers.jobs[slot].map_or(f64::NAN, |j| j.start);
    let members = &servers.members[class];
    let mut best = members[0];
    for &slot in &members[1..] {
        if better(start(slot), start(best)) {
            best = slot;
        }
    }
    best
}
