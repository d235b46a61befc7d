//! Regeneration of the term and case tables (figures 16 to 22).
//!
//! Every cell is computed from the calculus or the engine; only row keys
//! are enumerated here.

use thiserror::Error;

use crate::engine::{figure20_rows, prove_proposition2};
use crate::orevkov::{e_values, f_value, g_value, nest_terms, second_formula_residual};
use crate::rules::allowed_zones;
use crate::scheme::{ComplexType, NestScheme, RealScheme, SepTag, Sign};

pub const FIGURES: [u32; 7] = [16, 17, 18, 19, 20, 21, 22];

/// Published value that differs from the computed one: `(figure, row, column, printed)`.
pub const PRINTED_DISCREPANCIES: [(u32, usize, &str, i32); 1] = [(21, 3, "E0", -2)];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("unknown figure {0}; expected one of 16..=22")]
    UnknownFigure(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Text,
    Tsv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub figure: u32,
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(figure: u32, title: &str, header: &[&str]) -> Self {
        Table {
            figure,
            title: title.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Integer cell at `(row, column name)`.
    pub fn int(&self, row: usize, column: &str) -> Option<i32> {
        let c = self.header.iter().position(|h| h == column)?;
        self.rows.get(row)?.get(c)?.parse().ok()
    }

    pub fn render(&self, format: TableFormat) -> String {
        match format {
            TableFormat::Text => self.render_text(),
            TableFormat::Tsv => self.render_tsv(),
        }
    }

    fn render_tsv(&self) -> String {
        let mut out = self.header.join("\t");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join("\t"));
            out.push('\n');
        }
        out
    }

    fn render_text(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|c| {
                self.rows
                    .iter()
                    .map(|r| r[c].chars().count())
                    .chain([self.header[c].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
            let mut l = padded.join("  ").trim_end().to_string();
            l.push('\n');
            l
        };
        let mut out = format!("Figure {}: {}\n", self.figure, self.title);
        out.push_str(&line(&self.header));
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        out.push_str(&line(&rule));
        for r in &self.rows {
            out.push_str(&line(r));
        }
        out
    }
}

fn zone_set(z: &[usize]) -> String {
    let inner: Vec<String> = z.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// The ten nest schemes with `|a+ - a-| <= 2`, in table order.
pub fn nest_scheme_rows() -> Vec<NestScheme> {
    let mut rows: Vec<NestScheme> = Vec::new();
    for diff in -2..=2 {
        for nu in Sign::BOTH {
            let alpha = if diff % 2 == 0 { 4 } else { 3 };
            rows.push(NestScheme::with_diff(nu, alpha, diff).expect("valid difference"));
        }
    }
    rows.sort_by_key(|s| s.table_key());
    rows
}

/// Separating types in table order: even ones by sign then `d`, `u`; odd ones by `(nu, mu)`.
pub fn separating_type_rows() -> Vec<ComplexType> {
    let mut rows = Vec::new();
    for nu in Sign::BOTH {
        for tag in [SepTag::D, SepTag::U] {
            rows.push(ComplexType::new(NestScheme::with_diff(nu, 2, 0).unwrap(), tag).unwrap());
        }
    }
    for nu in Sign::BOTH {
        for mu in Sign::BOTH {
            rows.push(ComplexType::new(NestScheme::with_diff(nu, 3, mu.value()).unwrap(), SepTag::S).unwrap());
        }
    }
    rows
}

fn even(nu: Sign) -> NestScheme {
    NestScheme::with_diff(nu, 2, 0).unwrap()
}

fn figure16() -> Table {
    let mut t = Table::new(16, "terms of a nest scheme", &["S", "pi", "pi'", "N", "M", "G"]);
    for s in nest_scheme_rows() {
        let x = nest_terms(&s);
        t.push(vec![
            s.short(),
            x.pi.to_string(),
            x.pi_prime.to_string(),
            x.big_n.to_string(),
            x.big_m.to_string(),
            g_value(&s).to_string(),
        ]);
    }
    t
}

fn figure17() -> Table {
    let mut t = Table::new(17, "F of a separating type", &["type", "F"]);
    for ty in separating_type_rows() {
        t.push(vec![ty.to_string(), f_value(&ty).expect("separating").to_string()]);
    }
    t
}

/// Sign triples with the minus signs first, by number of plus signs.
fn sign_triples() -> Vec<[Sign; 3]> {
    (0..=3)
        .map(|plus| std::array::from_fn(|i| if i >= 3 - plus { Sign::Plus } else { Sign::Minus }))
        .collect()
}

fn figure18() -> Table {
    let mut t = Table::new(18, "E values of jump-free even schemes", &["S1", "S2", "S3", "E0", "E1", "E2", "E3", "Z"]);
    for signs in sign_triples() {
        let s = signs.map(even);
        let e = e_values(&s[0], &s[1], &s[2]);
        let mut row: Vec<String> = s.iter().map(|x| x.short()).collect();
        row.extend(e.iter().map(|v| v.to_string()));
        row.push(zone_set(&allowed_zones(&s)));
        t.push(row);
    }
    t
}

fn figure19() -> Table {
    let mut t = Table::new(19, "F - G - G for even separating types", &["type", "Sj", "Sk", "F-G-G"]);
    let companions = [[Sign::Minus, Sign::Minus], [Sign::Minus, Sign::Plus], [Sign::Plus, Sign::Plus]];
    for ty in separating_type_rows().into_iter().filter(|t| t.tag != SepTag::S) {
        for [a, b] in companions {
            let r = second_formula_residual(&ty, &even(a), &even(b)).expect("separating");
            t.push(vec![ty.to_string(), a.to_string(), b.to_string(), r.to_string()]);
        }
    }
    t
}

/// Scheme used to read off the even case rows; any all-even scheme gives the same rows.
pub fn figure20_reference_scheme() -> RealScheme {
    RealScheme::new([2, 2, 20], 1).expect("valid scheme")
}

fn figure20() -> Table {
    let mut t = Table::new(20, "candidate types of an all-even scheme", &["S1", "S2", "S3", "Z"]);
    for (nests, z) in figure20_rows(&figure20_reference_scheme()) {
        let mut row: Vec<String> = nests.iter().map(|n| n.to_string()).collect();
        row.push(zone_set(&z));
        t.push(row);
    }
    t
}

fn figure21() -> Table {
    let mut t = Table::new(21, "E0 when |lambda0| = 3", &["S1", "S2", "S3", "E0", "note"]);
    for (i, row) in prove_proposition2().rows.iter().enumerate() {
        let note = PRINTED_DISCREPANCIES
            .iter()
            .find(|(f, r, _, _)| *f == 21 && *r == i)
            .map(|(_, _, col, v)| format!("printed {col}={v}"))
            .unwrap_or_default();
        let mut cells = row.schemes.to_vec();
        cells.push(row.e0.to_string());
        cells.push(note);
        t.push(cells);
    }
    t
}

fn figure22() -> Table {
    let mut t = Table::new(22, "E1, E2, E3 for the rows with E0 = 0", &["S1", "S2", "S3", "E1", "E2", "E3"]);
    for row in prove_proposition2().rows {
        if let Some(e) = row.e_triangles {
            let mut cells = row.schemes.to_vec();
            cells.extend(e.iter().map(|v| v.to_string()));
            t.push(cells);
        }
    }
    t
}

pub fn figure(id: u32) -> Result<Table, TableError> {
    match id {
        16 => Ok(figure16()),
        17 => Ok(figure17()),
        18 => Ok(figure18()),
        19 => Ok(figure19()),
        20 => Ok(figure20()),
        21 => Ok(figure21()),
        22 => Ok(figure22()),
        other => Err(TableError::UnknownFigure(other)),
    }
}
