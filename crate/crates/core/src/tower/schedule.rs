//! The stage schedules `s`, `t` and `r`.
//!
//! `g` enumerates `ω³` by nested Cantor unpairing: `g(n) = (p, q, r)` where
//! `n = ⟨p, m⟩` and `m = ⟨q, r⟩`. Then `s(n) = (p, q)` and `t(n) = (p, r)`
//! when `n >= max` of the pair, and `(0, 0)` otherwise; both are onto
//! `ω × ω` with every value taken only at arguments `>=` its maximum.
//! `r(2n) = s(n)` and `r(2n+1) = t(n)`.

use num_integer::Roots;

/// Inverse of the Cantor pairing `⟨x, y⟩ = (x+y)(x+y+1)/2 + y`.
pub fn cantor_unpair(n: u64) -> (u64, u64) {
    let w = ((8 * n as u128 + 1).sqrt() as u64 - 1) / 2;
    let t = w * (w + 1) / 2;
    let y = n - t;
    (w - y, y)
}

pub fn cantor_pair(x: u64, y: u64) -> u64 {
    (x + y) * (x + y + 1) / 2 + y
}

/// `g(n) = (p, q, r)`.
pub fn triple(n: u64) -> (u64, u64, u64) {
    let (p, m) = cantor_unpair(n);
    let (q, r) = cantor_unpair(m);
    (p, q, r)
}

fn guarded(n: u64, pair: (u64, u64)) -> (u64, u64) {
    if n >= pair.0.max(pair.1) {
        pair
    } else {
        (0, 0)
    }
}

/// The task a tower stage performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Task {
    Dim,
    Crooked,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Dim => "dim",
            Task::Crooked => "crooked",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [Task::Dim, Task::Crooked].into_iter().find(|t| t.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    S,
    T,
    R,
}

impl Schedule {
    /// The scheduled pair `(stage, index)`.
    pub fn eval(self, n: u64) -> (u64, u64) {
        match self {
            Schedule::S => {
                let (p, q, _) = triple(n);
                guarded(n, (p, q))
            }
            Schedule::T => {
                let (p, _, r) = triple(n);
                guarded(n, (p, r))
            }
            Schedule::R => {
                if n % 2 == 0 {
                    Schedule::S.eval(n / 2)
                } else {
                    Schedule::T.eval(n / 2)
                }
            }
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "s" => Some(Schedule::S),
            "t" => Some(Schedule::T),
            "r" => Some(Schedule::R),
            _ => None,
        }
    }
}

/// The task of tower stage `n >= 1` under `r`: `r(n)` comes from `s` for
/// even `n` and from `t` for odd `n`.
pub fn stage_task(n: u64) -> (Task, (u64, u64)) {
    let task = if n % 2 == 0 { Task::Dim } else { Task::Crooked };
    (task, Schedule::R.eval(n))
}
