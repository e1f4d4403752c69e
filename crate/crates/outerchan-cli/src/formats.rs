//! Plain-text matrix formats.
//!
//! `.bits` files carry one matrix row of `0`/`1` characters per line.
//! `.rx` files are the same with a lone `?` line marking an erased slot.
//! Both are diff-friendly so worked examples can live in fixtures.

use anyhow::{bail, Result};
use outerchan::channel::{ReceivedMatrix, ReceivedRow};
use outerchan::gf2::BitMatrix;

pub fn parse_bits(text: &str) -> Result<BitMatrix> {
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::with_capacity(line.len());
        for ch in line.chars() {
            match ch {
                '0' => row.push(0),
                '1' => row.push(1),
                _ => bail!("line {}: unexpected character {ch:?}", ln + 1),
            }
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                bail!("line {}: row length {} differs from {}", ln + 1, row.len(), first.len());
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        bail!("no rows in input");
    }
    Ok(BitMatrix::from_bit_rows(&rows))
}

pub fn format_bits(m: &BitMatrix) -> String {
    let mut out = String::with_capacity(m.rows() * (m.cols() + 1));
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.push(if m.get(r, c) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

pub fn parse_rx(text: &str) -> Result<ReceivedMatrix> {
    let mut slots = Vec::new();
    let mut width: Option<usize> = None;
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == "?" {
            slots.push(ReceivedRow::Erased);
            continue;
        }
        let mut row = Vec::with_capacity(line.len());
        for ch in line.chars() {
            match ch {
                '0' => row.push(0),
                '1' => row.push(1),
                _ => bail!("line {}: unexpected character {ch:?}", ln + 1),
            }
        }
        match width {
            None => width = Some(row.len()),
            Some(wd) if wd != row.len() => {
                bail!("line {}: row length {} differs from {wd}", ln + 1, row.len())
            }
            Some(_) => {}
        }
        slots.push(ReceivedRow::Present(row));
    }
    if slots.is_empty() {
        bail!("no slots in input");
    }
    Ok(ReceivedMatrix::new(slots))
}

pub fn format_rx(z: &ReceivedMatrix) -> String {
    let mut out = String::new();
    for slot in z.slots() {
        match slot {
            ReceivedRow::Erased => out.push('?'),
            ReceivedRow::Present(bits) => {
                for &b in bits {
                    out.push(if b != 0 { '1' } else { '0' });
                }
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_round_trip() {
        let text = "0011\n0101\n";
        let m = parse_bits(text).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 4));
        assert_eq!(format_bits(&m), text);
        assert!(parse_bits("01\n012\n").is_err());
        assert!(parse_bits("0x1\n").is_err());
        assert!(parse_bits("").is_err());
    }

    #[test]
    fn rx_round_trip() {
        let text = "0011001\n?\n1111011\n";
        let z = parse_rx(text).unwrap();
        assert_eq!(z.len(), 3);
        assert!(z.slot(1).is_erased());
        assert_eq!(format_rx(&z), text);
        assert!(parse_rx("01\n0\n").is_err());
    }
}
