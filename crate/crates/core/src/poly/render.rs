//! Canonical text form: terms in descending graded lexicographic order,
//! joined by ` + ` / ` - `, with `*` products and `^` powers. The output is
//! accepted back by [`super::parse_expression`].

use core::fmt;

use num_traits::{One, Signed};

use super::SparsePoly;
use crate::number::format_rational;

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut factors = 0;
            if m.is_one() || !abs.is_one() {
                f.write_str(&format_rational(&abs))?;
                factors += 1;
            }
            for (name, &e) in self.vars().names().iter().zip(m.exps()) {
                if e == 0 {
                    continue;
                }
                if factors > 0 {
                    f.write_str("*")?;
                }
                f.write_str(name)?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
                factors += 1;
            }
        }
        Ok(())
    }
}
