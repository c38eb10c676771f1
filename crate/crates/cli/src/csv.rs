//! Plain CSV emission. Every float is printed with six decimals and a `.`
//! separator regardless of locale.

use std::fmt::Write as _;

pub fn num(x: f64) -> String {
    format!("{x:.6}")
}

#[derive(Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut c = Self::default();
        c.row(header.iter().map(|s| s.to_string()));
        c
    }

    pub fn row(&mut self, cells: impl IntoIterator<Item = String>) {
        let cells: Vec<String> = cells.into_iter().collect();
        writeln!(self.text, "{}", cells.join(",")).expect("string write");
    }

    pub fn into_string(self) -> String {
        self.text
    }
}
