//! Finite abelian groups `Z_{n_1} × … × Z_{n_r}` written multiplicatively,
//! with elements as Laurent monomials in `x, y, z, w` (or `g0, g1, …`).

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("cyclic factor orders must be positive")]
    ZeroOrder,
    #[error("cannot parse monomial {0:?}")]
    Parse(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
}

/// Elements are indexed `0..order()` in mixed radix with the last generator
/// varying fastest; index 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    orders: Vec<u32>,
    names: Vec<String>,
}

const NAMES: [&str; 4] = ["x", "y", "z", "w"];

impl AbelianGroup {
    /// # Errors
    /// If some order is zero.
    pub fn new(orders: &[u32]) -> Result<Self, GroupError> {
        if orders.contains(&0) {
            return Err(GroupError::ZeroOrder);
        }
        let names = if orders.len() <= NAMES.len() {
            NAMES[..orders.len()].iter().map(|s| (*s).to_string()).collect()
        } else {
            (0..orders.len()).map(|i| format!("g{i}")).collect()
        };
        Ok(Self {
            orders: orders.to_vec(),
            names,
        })
    }

    /// `Z_n`.
    #[must_use]
    pub fn cyclic(n: u32) -> Self {
        Self::new(&[n.max(1)]).expect("positive")
    }

    /// `self × other`.
    #[must_use]
    pub fn product(&self, other: &Self) -> Self {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        Self::new(&orders).expect("positive")
    }

    #[must_use]
    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    #[must_use]
    pub fn order(&self) -> usize {
        self.orders.iter().map(|&o| o as usize).product()
    }

    #[must_use]
    pub fn identity(&self) -> usize {
        0
    }

    /// Exponent vector of an element.
    #[must_use]
    pub fn exponents(&self, mut g: usize) -> Vec<u32> {
        let mut e = vec![0; self.orders.len()];
        for i in (0..self.orders.len()).rev() {
            let o = self.orders[i] as usize;
            e[i] = (g % o) as u32;
            g /= o;
        }
        e
    }

    /// Element with the given exponents, reduced modulo the orders.
    #[must_use]
    pub fn element(&self, exps: &[i64]) -> usize {
        let mut g = 0usize;
        for (i, &o) in self.orders.iter().enumerate() {
            let e = exps.get(i).copied().unwrap_or(0).rem_euclid(i64::from(o));
            g = g * o as usize + e as usize;
        }
        g
    }

    /// The `i`-th generator.
    #[must_use]
    pub fn generator(&self, i: usize) -> usize {
        let mut e = vec![0i64; self.rank()];
        e[i] = 1;
        self.element(&e)
    }

    #[must_use]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let (ea, eb) = (self.exponents(a), self.exponents(b));
        let e: Vec<i64> = ea.iter().zip(&eb).map(|(x, y)| i64::from(x + y)).collect();
        self.element(&e)
    }

    #[must_use]
    pub fn inv(&self, a: usize) -> usize {
        let e: Vec<i64> = self.exponents(a).iter().map(|&x| -i64::from(x)).collect();
        self.element(&e)
    }

    /// `a · b⁻¹`.
    #[must_use]
    pub fn div(&self, a: usize, b: usize) -> usize {
        self.mul(a, self.inv(b))
    }

    /// Multiplication table, `table[a][b] = ab`.
    #[must_use]
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order())
            .map(|a| (0..self.order()).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// Monomial form, e.g. `x^3y^2`, `x`, `1`.
    #[must_use]
    pub fn render(&self, g: usize) -> String {
        let mut s = String::new();
        for (name, e) in self.names.iter().zip(self.exponents(g)) {
            match e {
                0 => {}
                1 => s.push_str(name),
                _ => s.push_str(&format!("{name}^{e}")),
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }

    /// Parses a monomial such as `x^3y^-1`, `x*y`, `g0^2g1` or `1`.
    ///
    /// # Errors
    /// On malformed input or an unknown generator name.
    pub fn parse(&self, text: &str) -> Result<usize, GroupError> {
        let t: String = text.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        if t == "1" || t.is_empty() {
            return Ok(0);
        }
        let mut exps = vec![0i64; self.rank()];
        let chars: Vec<char> = t.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let start = i;
            if !chars[i].is_ascii_alphabetic() {
                return Err(GroupError::Parse(text.to_string()));
            }
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            let slot = self
                .names
                .iter()
                .position(|n| *n == name)
                .ok_or_else(|| GroupError::UnknownGenerator(name.clone()))?;
            let mut e = 1i64;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let s = i;
                if i < chars.len() && chars[i] == '-' {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let num: String = chars[s..i].iter().collect();
                e = num.parse().map_err(|_| GroupError::Parse(text.to_string()))?;
            }
            exps[slot] += e;
        }
        Ok(self.element(&exps))
    }

    /// Parses `a + b + …` into a sorted support set of group elements; repeated
    /// terms cancel.
    ///
    /// # Errors
    /// As [`Self::parse`].
    pub fn parse_polynomial(&self, text: &str) -> Result<Vec<usize>, GroupError> {
        let mut out: Vec<usize> = Vec::new();
        for term in text.split('+').map(str::trim).filter(|s| !s.is_empty()) {
            let g = self.parse(term)?;
            if let Some(p) = out.iter().position(|&h| h == g) {
                out.remove(p);
            } else {
                out.push(g);
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// `{g⁻¹ : g ∈ s}`, sorted.
    #[must_use]
    pub fn inverse_set(&self, s: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = s.iter().map(|&g| self.inv(g)).collect();
        v.sort_unstable();
        v
    }

    /// `{g h : g ∈ s}`, sorted.
    #[must_use]
    pub fn translate(&self, s: &[usize], h: usize) -> Vec<usize> {
        let mut v: Vec<usize> = s.iter().map(|&g| self.mul(g, h)).collect();
        v.sort_unstable();
        v
    }
}
