use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Schubert normal form (p, q) of a two-bridge knot (p odd) or link (p even).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoBridgeCode {
    pub p: u32,
    pub q: u32,
}

impl TwoBridgeCode {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        let bad = |reason: &str| Err(Error::InvalidCode { p, q, reason: reason.into() });
        if p < 2 {
            return bad("p must be at least 2");
        }
        if q == 0 || q >= p {
            return bad("need 0 < q < p");
        }
        if p.gcd(&q) != 1 {
            return bad("p and q must be coprime");
        }
        if q.is_multiple_of(2) {
            return bad("q must be odd");
        }
        Ok(TwoBridgeCode { p, q })
    }

    pub fn component_count(&self) -> usize {
        if self.p % 2 == 1 {
            1
        } else {
            2
        }
    }

    pub fn is_knot(&self) -> bool {
        self.component_count() == 1
    }

    /// ε_i = (−1)^⌊iq/p⌋ for i = 1..p−1.
    pub fn signs(&self) -> Vec<i32> {
        (1..self.p).map(|i| if (i * self.q / self.p).is_multiple_of(2) { 1 } else { -1 }).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gen {
    A,
    B,
}

impl Gen {
    pub fn swap(self) -> Gen {
        match self {
            Gen::A => Gen::B,
            Gen::B => Gen::A,
        }
    }
}

/// Word in a^±1, b^±1; each letter carries exponent ±1.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<(Gen, i32)>);

impl Word {
    pub fn letter(g: Gen, e: i32) -> Word {
        let s = e.signum();
        Word((0..e.abs()).map(|_| (g, s)).collect())
    }

    pub fn concat(&self, o: &Word) -> Word {
        Word(self.0.iter().chain(o.0.iter()).copied().collect())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn swapped(&self) -> Word {
        Word(self.0.iter().map(|&(g, e)| (g.swap(), e)).collect())
    }

    pub fn exponent_sum(&self, g: Gen) -> i32 {
        self.0.iter().filter(|(h, _)| *h == g).map(|(_, e)| e).sum()
    }

    /// Free reduction.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<(Gen, i32)> = Vec::new();
        for &(g, e) in &self.0 {
            if let Some(&(h, f)) = out.last() {
                if h == g && f == -e {
                    out.pop();
                    continue;
                }
            }
            out.push((g, e));
        }
        Word(out)
    }

    /// Number of maximal runs of a single generator.
    pub fn syllable_length(&self) -> usize {
        let r = self.reduced();
        let mut n = 0;
        let mut last: Option<Gen> = None;
        for &(g, _) in &r.0 {
            if last != Some(g) {
                n += 1;
                last = Some(g);
            }
        }
        n
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(g, e)| {
                let c = match g {
                    Gen::A => "a",
                    Gen::B => "b",
                };
                if *e == 1 {
                    c.to_string()
                } else {
                    format!("{c}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Presentation {
    pub code: TwoBridgeCode,
    /// The word w of the defining relation (wa = bw for knots, aw = wa for links).
    pub w: Word,
    pub relator: Word,
    /// One longitude word per component; component 1 commutes with a, component 2 with b.
    pub longitudes: Vec<Word>,
}

/// Two-generator presentation from the sign sequence.
pub fn presentation(code: &TwoBridgeCode) -> Result<Presentation> {
    let code = TwoBridgeCode::new(code.p, code.q)?;
    let eps = code.signs();
    if code.is_knot() {
        // w = a^ε1 b^ε2 a^ε3 ..., relation w a w⁻¹ b⁻¹
        let w = Word(
            eps.iter().enumerate().map(|(i, &e)| (if i % 2 == 0 { Gen::A } else { Gen::B }, e)).collect(),
        );
        let relator = w.concat(&Word::letter(Gen::A, 1)).concat(&w.inverse()).concat(&Word::letter(Gen::B, -1));
        let sigma: i32 = eps.iter().sum();
        let longitude = w.reversed().concat(&w).concat(&Word::letter(Gen::A, -2 * sigma));
        Ok(Presentation { code, w, relator, longitudes: vec![longitude] })
    } else {
        // w = b^ε1 a^ε2 b^ε3 ..., relation a w a⁻¹ w⁻¹
        let w = Word(
            eps.iter().enumerate().map(|(i, &e)| (if i % 2 == 0 { Gen::B } else { Gen::A }, e)).collect(),
        );
        let relator = Word::letter(Gen::A, 1)
            .concat(&w)
            .concat(&Word::letter(Gen::A, -1))
            .concat(&w.inverse());
        let s_a = w.exponent_sum(Gen::A);
        let la = w.concat(&Word::letter(Gen::A, -s_a));
        let lb = w.swapped().concat(&Word::letter(Gen::B, -s_a));
        Ok(Presentation { code, w, relator, longitudes: vec![la, lb] })
    }
}

/// Exponent sums of a word under the abelianization (per component).
pub fn abelianize(code: &TwoBridgeCode, w: &Word) -> Vec<i32> {
    if code.is_knot() {
        vec![w.exponent_sum(Gen::A) + w.exponent_sum(Gen::B)]
    } else {
        vec![w.exponent_sum(Gen::A), w.exponent_sum(Gen::B)]
    }
}
