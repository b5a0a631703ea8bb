//! Benchmark families and timing.

use std::fmt;
use std::hint::black_box;
use std::str::FromStr;
use std::time::Instant;

use tyre::literal::lower;
use tyre::{runtime, Program, TypedRegex, UntypedRegex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `a^n` on `a^n`.
    Concat,
    /// `a*` on `a^n`.
    Star,
    /// `((a*c)|a)*b` on `a^n b`.
    Star2,
    /// Left-nested alternation of `n` copies of `a`, on `a`.
    Alt,
    AltBalanced,
    AltGrouped,
    AltBalancedGrouped,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Concat,
        Family::Star,
        Family::Star2,
        Family::Alt,
        Family::AltBalanced,
        Family::AltGrouped,
        Family::AltBalancedGrouped,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Concat => "concat",
            Family::Star => "star",
            Family::Star2 => "star2",
            Family::Alt => "alt",
            Family::AltBalanced => "alt-balanced",
            Family::AltGrouped => "alt-grouped",
            Family::AltBalancedGrouped => "alt-balanced-grouped",
        }
    }

    pub fn untyped(self, n: usize) -> UntypedRegex {
        let a = || UntypedRegex::Exactly('a');
        let re = match self {
            Family::Concat => {
                let mut re = a();
                for _ in 1..n {
                    re = UntypedRegex::concat(a(), re);
                }
                re
            }
            Family::Star => UntypedRegex::rep0(a()),
            Family::Star2 => UntypedRegex::concat(
                UntypedRegex::rep0(UntypedRegex::alt(
                    UntypedRegex::concat(UntypedRegex::rep0(a()), UntypedRegex::Exactly('c')),
                    a(),
                )),
                UntypedRegex::Exactly('b'),
            ),
            Family::Alt | Family::AltGrouped => {
                let mut re = a();
                for _ in 1..n {
                    re = UntypedRegex::alt(re, a());
                }
                re
            }
            Family::AltBalanced | Family::AltBalancedGrouped => balanced(n),
        };
        UntypedRegex::keep(re)
    }

    pub fn regex(self, n: usize) -> TypedRegex {
        let re = lower(&self.untyped(n));
        match self {
            Family::AltGrouped | Family::AltBalancedGrouped => tyre::regex::ignore(re),
            _ => re,
        }
    }

    pub fn input(self, n: usize) -> String {
        match self {
            Family::Concat | Family::Star => "a".repeat(n),
            Family::Star2 => format!("{}b", "a".repeat(n)),
            _ => "a".to_string(),
        }
    }
}

fn balanced(n: usize) -> UntypedRegex {
    if n <= 1 {
        return UntypedRegex::Exactly('a');
    }
    let left = n / 2;
    UntypedRegex::alt(balanced(left), balanced(n - left))
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family '{s}'"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub family: Family,
    pub n: usize,
    pub sample: usize,
    pub compile_ns: u128,
    pub parse_ns: u128,
}

pub const CSV_HEADER: &str = "family,n,sample,compile_ns,parse_ns";

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{}",
            self.family, self.n, self.sample, self.compile_ns, self.parse_ns
        )
    }
}

/// Times `samples` compile-and-parse runs of the family at size `n`, after
/// one untimed warm-up run. Panics if the input does not parse.
pub fn measure(family: Family, n: usize, samples: usize) -> Vec<Row> {
    let re = family.regex(n);
    let input = family.input(n);
    let warm = Program::new(&re);
    assert!(
        runtime::run_full(warm.machine(), &input).is_some(),
        "{family} n={n} does not parse its input"
    );
    (0..samples)
        .map(|sample| {
            let t0 = Instant::now();
            let program = black_box(Program::new(black_box(&re)));
            let compile_ns = t0.elapsed().as_nanos();
            let t1 = Instant::now();
            let v = black_box(runtime::run_full(program.machine(), black_box(&input)));
            let parse_ns = t1.elapsed().as_nanos();
            drop(v);
            Row {
                family,
                n,
                sample,
                compile_ns,
                parse_ns,
            }
        })
        .collect()
}

pub fn run(family: Family, sizes: &[usize], samples: usize) -> Vec<Row> {
    sizes
        .iter()
        .flat_map(|&n| measure(family, n, samples))
        .collect()
}

/// Mean parse time in nanoseconds.
pub fn mean_parse_ns(rows: &[Row]) -> f64 {
    rows.iter().map(|r| r.parse_ns as f64).sum::<f64>() / rows.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_parse_their_inputs() {
        for family in Family::ALL {
            for n in [1, 2, 5, 8] {
                let p = Program::new(&family.regex(n));
                assert!(
                    runtime::is_match(p.machine(), &family.input(n)),
                    "{family} {n}"
                );
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for family in Family::ALL {
            assert_eq!(family.name().parse::<Family>(), Ok(family));
        }
        assert!("nope".parse::<Family>().is_err());
    }

    fn leaves_and_depth(re: &UntypedRegex) -> (usize, usize) {
        match re {
            UntypedRegex::Alt(a, b) => {
                let (la, da) = leaves_and_depth(a);
                let (lb, db) = leaves_and_depth(b);
                (la + lb, 1 + da.max(db))
            }
            _ => (1, 1),
        }
    }

    #[test]
    fn balanced_alternation() {
        assert_eq!(leaves_and_depth(&balanced(8)), (8, 4));
        assert_eq!(leaves_and_depth(&balanced(1000)), (1000, 11));
        let UntypedRegex::Keep(unbalanced) = Family::Alt.untyped(8) else {
            panic!()
        };
        assert_eq!(leaves_and_depth(&unbalanced), (8, 8));
    }

    #[test]
    fn rows_per_size() {
        let rows = run(Family::Star, &[10, 20, 40], 2);
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[5].to_string().split(',').count(), 5);
    }
}
