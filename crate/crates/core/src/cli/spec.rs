//! Group specifications: `S5`, `D7*C3`, `E(3,2)`, `GD(1;3,5)`,
//! `perm(4){(1 2),(1 2 3 4)}`.
//!
//! ```text
//! spec := term ("*" term)*
//! term := name | "GD(" int ";" int ("," int)* ")" | "perm(" int "){" gens "}"
//! name := ("S" | "A" | "C" | "D") int | "Q8" | "E(" int "," int ")"
//! gens := cycles ("," cycles)*      cycles := ("(" int* ")")+
//! ```
//!
//! Cycle points are 1-indexed. Whitespace is ignored between tokens.

use std::fmt;

use thiserror::Error;

use crate::lattice::prime_power;
use crate::perm::{GroupHandle, PermError, Permutation};

/// Largest degree any single term may ask for.
pub const MAX_DEGREE: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("at column {column}: {message}")]
pub struct ParseError {
    /// 1-indexed character position.
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Symmetric(usize),
    Alternating(usize),
    Cyclic(usize),
    /// Dihedral of order `2n`.
    Dihedral(usize),
    Quaternion,
    Elementary { p: u64, d: u32 },
    /// `(∏ E(p_i, d)) ⋊ C_2`, the involution inverting every coordinate.
    Gd { d: u32, primes: Vec<u64> },
    /// Generators as 1-indexed cycles.
    Perm { degree: usize, generators: Vec<Vec<Vec<u32>>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub terms: Vec<Term>,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Symmetric(n) => write!(f, "S{n}"),
            Term::Alternating(n) => write!(f, "A{n}"),
            Term::Cyclic(n) => write!(f, "C{n}"),
            Term::Dihedral(n) => write!(f, "D{n}"),
            Term::Quaternion => write!(f, "Q8"),
            Term::Elementary { p, d } => write!(f, "E({p},{d})"),
            Term::Gd { d, primes } => {
                let ps: Vec<String> = primes.iter().map(u64::to_string).collect();
                write!(f, "GD({d};{})", ps.join(","))
            }
            Term::Perm { degree, generators } => {
                write!(f, "perm({degree}){{")?;
                for (i, g) in generators.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    if g.is_empty() {
                        write!(f, "()")?;
                    }
                    for c in g {
                        let pts: Vec<String> = c.iter().map(u32::to_string).collect();
                        write!(f, "({})", pts.join(" "))?;
                    }
                }
                write!(f, "}}")
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn err<T>(&self, at: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            column: at + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self
                .chars
                .get(self.pos)
                .map(|c| format!("'{c}'"))
                .unwrap_or_else(|| "end of input".into());
            self.err(self.pos, format!("expected '{c}', found {found}"))
        }
    }

    fn int(&mut self) -> Result<(u64, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected an integer");
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        match text.parse::<u64>() {
            Ok(v) => Ok((v, start)),
            Err(_) => self.err(start, "integer too large"),
        }
    }

    fn ranged(&self, v: u64, at: usize, lo: u64, hi: u64, what: &str) -> Result<usize, ParseError> {
        if v < lo || v > hi {
            return self.err(at, format!("{what} must be between {lo} and {hi}, got {v}"));
        }
        Ok(v as usize)
    }

    fn prime(&self, v: u64, at: usize) -> Result<u64, ParseError> {
        match prime_power(v) {
            Some((p, 1)) if p == v => Ok(v),
            _ => self.err(at, format!("{v} is not prime")),
        }
    }

    fn spec(&mut self) -> Result<GroupSpec, ParseError> {
        let mut terms = vec![self.term()?];
        while self.eat('*') {
            terms.push(self.term()?);
        }
        if let Some(c) = self.peek() {
            return self.err(self.pos, format!("unexpected '{c}'"));
        }
        Ok(GroupSpec { terms })
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let w: Vec<char> = word.chars().collect();
        if self.chars[self.pos..].starts_with(&w) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let max = MAX_DEGREE as u64;
        if self.keyword("GD") {
            self.expect('(')?;
            let (d, at) = self.int()?;
            let d = self.ranged(d, at, 1, 64, "rank")? as u32;
            self.expect(';')?;
            let mut primes = Vec::new();
            loop {
                let (p, at) = self.int()?;
                let p = self.prime(p, at)?;
                if p == 2 {
                    return self.err(at, "GD primes must be odd");
                }
                if primes.contains(&p) {
                    return self.err(at, format!("prime {p} repeated"));
                }
                primes.push(p);
                if !self.eat(',') {
                    break;
                }
            }
            self.expect(')')?;
            return Ok(Term::Gd { d, primes });
        }
        if self.keyword("perm") {
            self.expect('(')?;
            let (n, at) = self.int()?;
            let degree = self.ranged(n, at, 1, max, "degree")?;
            self.expect(')')?;
            self.expect('{')?;
            let mut generators = Vec::new();
            loop {
                generators.push(self.cycles(degree)?);
                if !self.eat(',') {
                    break;
                }
            }
            self.expect('}')?;
            return Ok(Term::Perm { degree, generators });
        }
        if self.keyword("Q8") {
            return Ok(Term::Quaternion);
        }
        if self.keyword("E") {
            self.expect('(')?;
            let (p, at) = self.int()?;
            let p = self.prime(p, at)?;
            self.expect(',')?;
            let (d, at) = self.int()?;
            let d = self.ranged(d, at, 1, 64, "rank")? as u32;
            self.expect(')')?;
            return Ok(Term::Elementary { p, d });
        }
        let kind = match self.peek() {
            Some(c @ ('S' | 'A' | 'C' | 'D')) => c,
            Some(c) => return self.err(start, format!("unknown group name starting with '{c}'")),
            None => return self.err(start, "expected a group"),
        };
        self.pos += 1;
        if !self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            return self.err(self.pos, "expected an integer");
        }
        let (n, at) = self.int()?;
        Ok(match kind {
            'S' => Term::Symmetric(self.ranged(n, at, 1, max, "degree")?),
            'A' => Term::Alternating(self.ranged(n, at, 1, max, "degree")?),
            'C' => Term::Cyclic(self.ranged(n, at, 1, max, "order")?),
            _ => Term::Dihedral(self.ranged(n, at, 3, max, "n")?),
        })
    }

    /// One generator: juxtaposed cycles, or `()` for the identity.
    fn cycles(&mut self, degree: usize) -> Result<Vec<Vec<u32>>, ParseError> {
        let mut out = Vec::new();
        let mut seen = vec![false; degree + 1];
        if self.peek() != Some('(') {
            return self.err(self.pos, "expected '('");
        }
        while self.eat('(') {
            let mut cycle = Vec::new();
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let (v, at) = self.int()?;
                let v = self.ranged(v, at, 1, degree as u64, "point")?;
                if seen[v] {
                    return self.err(at, format!("point {v} repeated"));
                }
                seen[v] = true;
                cycle.push(v as u32);
            }
            self.expect(')')?;
            if cycle.len() > 1 {
                out.push(cycle);
            } else if let Some(&v) = cycle.first() {
                seen[v as usize] = false;
            }
        }
        Ok(out)
    }
}

pub fn parse_spec(text: &str) -> Result<GroupSpec, ParseError> {
    Parser::new(text).spec()
}

impl std::str::FromStr for GroupSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_spec(s)
    }
}

fn cycles0(cycles: &[Vec<u32>]) -> Vec<Vec<u32>> {
    cycles
        .iter()
        .map(|c| c.iter().map(|&v| v - 1).collect())
        .collect()
}

fn perm(degree: usize, cycles: &[Vec<u32>]) -> Permutation {
    Permutation::from_cycles(degree, cycles).expect("constructed cycles are valid")
}

/// `x ↦ b + (−(x − b) mod p)` on each block `b, …, b+p−1`.
fn block_reversal(blocks: &[(u32, u32)], degree: usize) -> Permutation {
    let mut cycles = Vec::new();
    for &(base, p) in blocks {
        for x in 1..p {
            let y = p - x;
            if x < y {
                cycles.push(vec![base + x, base + y]);
            }
        }
    }
    perm(degree, &cycles)
}

impl Term {
    pub fn degree(&self) -> usize {
        match self {
            Term::Symmetric(n) | Term::Alternating(n) | Term::Cyclic(n) | Term::Dihedral(n) => *n,
            Term::Quaternion => 8,
            Term::Elementary { p, d } => *p as usize * *d as usize,
            Term::Gd { d, primes } => primes.iter().map(|&p| p as usize * *d as usize).sum(),
            Term::Perm { degree, .. } => *degree,
        }
    }

    pub fn generators(&self) -> Vec<Permutation> {
        let n = self.degree();
        let cycle = |from: u32, len: u32| (from..from + len).collect::<Vec<u32>>();
        match self {
            Term::Symmetric(n) if *n >= 2 => {
                vec![perm(*n, &[vec![0, 1]]), perm(*n, &[cycle(0, *n as u32)])]
            }
            Term::Alternating(n) if *n >= 3 => {
                (2..*n as u32).map(|k| perm(*n, &[vec![0, 1, k]])).collect()
            }
            Term::Cyclic(n) if *n >= 2 => vec![perm(*n, &[cycle(0, *n as u32)])],
            Term::Dihedral(n) => vec![
                perm(*n, &[cycle(0, *n as u32)]),
                block_reversal(&[(0, *n as u32)], *n),
            ],
            // Left multiplication by i and j on 1, i, j, k, −1, −i, −j, −k.
            Term::Quaternion => vec![
                perm(8, &[vec![0, 1, 4, 5], vec![2, 3, 6, 7]]),
                perm(8, &[vec![0, 2, 4, 6], vec![1, 7, 5, 3]]),
            ],
            Term::Elementary { p, d } => (0..*d)
                .map(|i| perm(n, &[cycle(i * *p as u32, *p as u32)]))
                .collect(),
            Term::Gd { d, primes } => {
                let mut blocks = Vec::new();
                let mut base = 0u32;
                for &p in primes {
                    for _ in 0..*d {
                        blocks.push((base, p as u32));
                        base += p as u32;
                    }
                }
                let mut gens: Vec<Permutation> = blocks
                    .iter()
                    .map(|&(b, p)| perm(n, &[cycle(b, p)]))
                    .collect();
                gens.push(block_reversal(&blocks, n));
                gens
            }
            Term::Perm { degree, generators } => generators
                .iter()
                .map(|g| perm(*degree, &cycles0(g)))
                .collect(),
            _ => Vec::new(),
        }
    }
}

impl GroupSpec {
    /// Sum of the term degrees; products act on disjoint points.
    pub fn degree(&self) -> usize {
        self.terms.iter().map(Term::degree).sum()
    }

    pub fn generators(&self) -> Vec<Permutation> {
        let total = self.degree();
        let mut offset = 0;
        let mut out = Vec::new();
        for t in &self.terms {
            out.extend(t.generators().iter().map(|g| g.shifted(offset, total)));
            offset += t.degree();
        }
        out
    }

    pub fn build(&self) -> Result<GroupHandle, PermError> {
        GroupHandle::build(&self.generators(), self.degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn order(s: &str) -> BigUint {
        parse_spec(s).unwrap().build().unwrap().order().clone()
    }

    #[test]
    fn family_orders() {
        let cases: &[(&str, u64)] = &[
            ("S5", 120),
            ("S1", 1),
            ("A5", 60),
            ("A3", 3),
            ("A2", 1),
            ("C7", 7),
            ("C1", 1),
            ("D3", 6),
            ("D15", 30),
            ("Q8", 8),
            ("E(2,3)", 8),
            ("E(5,2)", 25),
            ("GD(1;3,5)", 30),
            ("GD(2;3)", 18),
            ("GD(1;3,5,7)", 210),
            ("E(3,1)*E(5,1)", 15),
            ("E(2,2)*C3", 12),
            ("perm(4){(1 2),(1 2 3 4)}", 24),
            ("perm(8){(1 4 7)(2 8 5),(3 4 5)(6 8 7)}", 24),
            ("perm(3){()}", 1),
        ];
        for &(s, n) in cases {
            assert_eq!(order(s), BigUint::from(n), "{s}");
        }
    }

    #[test]
    fn quaternion_is_not_dihedral() {
        let g = parse_spec("Q8").unwrap().build().unwrap();
        let involutions = g
            .elements(8)
            .unwrap()
            .iter()
            .filter(|x| !x.is_identity() && x.compose(x).is_identity())
            .count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn degrees() {
        assert_eq!(parse_spec("S5").unwrap().degree(), 5);
        assert_eq!(parse_spec("GD(1;3,5)").unwrap().degree(), 8);
        assert_eq!(parse_spec("D7*C3").unwrap().degree(), 10);
    }

    #[test]
    fn round_trip() {
        for s in ["S5", " D7 * C3 ", "GD( 1 ; 3 , 5 )", "perm(5){(1 2)(3 4 5),(1)(2 3)}", "E(2,2)*Q8"] {
            let a = parse_spec(s).unwrap();
            let b = parse_spec(&a.to_string()).unwrap();
            assert_eq!(a, b);
        }
        assert_eq!(parse_spec(" D7 * C3 ").unwrap().to_string(), "D7*C3");
        assert_eq!(
            parse_spec("perm(5){(1)(2 3)}").unwrap().to_string(),
            "perm(5){(2 3)}"
        );
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_spec("S5*X3").unwrap_err();
        assert_eq!(e.column, 4);
        assert!(parse_spec("E(4,2)").unwrap_err().message.contains("not prime"));
        assert!(parse_spec("GD(1;3,3)").unwrap_err().message.contains("repeated"));
        assert!(parse_spec("GD(1;2)").is_err());
        assert!(parse_spec("D2").is_err());
        assert!(parse_spec("S").is_err());
        assert!(parse_spec("perm(3){(1 4)}").is_err());
        assert!(parse_spec("perm(3){(1 2 1)}").is_err());
        assert!(parse_spec("S5 S6").is_err());
        assert!(parse_spec("").is_err());
        assert_eq!(parse_spec("C3*").unwrap_err().column, 4);
    }
}
