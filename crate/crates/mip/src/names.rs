//! Reversible mapping from model names to identifiers accepted by LP files.
//!
//! Letters, digits and `_` pass through unchanged. Every other byte, and a
//! leading digit, becomes `#XX` with two upper-case hex digits, so the
//! mapping is injective and [`unmangle`] inverts it.

pub fn mangle(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for (i, b) in name.bytes().enumerate() {
        let plain = b.is_ascii_alphabetic() || b == b'_' || (b.is_ascii_digit() && i > 0);
        if plain {
            out.push(b as char);
        } else {
            out.push_str(&format!("#{b:02X}"));
        }
    }
    out
}

pub fn unmangle(text: &str) -> Option<String> {
    let bytes = text.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'#' {
            let hex = text.get(i + 1..i + 3)?;
            out.push(u8::from_str_radix(hex, 16).ok()?);
            i += 3;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    String::from_utf8(out).ok()
}

/// Fixed-width codes for MPS, used when some name does not fit eight
/// characters. Codes are assigned by position, so they are unique.
pub fn mps_names(names: &[&str], prefix: char) -> Vec<String> {
    let fits = names
        .iter()
        .all(|n| !n.is_empty() && n.len() <= 8 && n.bytes().all(|b| b.is_ascii_graphic()));
    if fits {
        names.iter().map(|n| n.to_string()).collect()
    } else {
        (0..names.len()).map(|i| format!("{prefix}{i:07}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_names_are_untouched() {
        assert_eq!(mangle("x_0_1_2"), "x_0_1_2");
    }

    #[test]
    fn special_bytes_round_trip() {
        for name in ["1abc", "a b", "y[3,4]", ".", "é", "a.b", "#"] {
            let m = mangle(name);
            assert!(m.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'#'));
            assert!(!m.as_bytes()[0].is_ascii_digit());
            assert_eq!(unmangle(&m).as_deref(), Some(name));
        }
    }

    #[test]
    fn long_names_fall_back_to_codes() {
        let short = mps_names(&["x", "y"], 'C');
        assert_eq!(short, vec!["x", "y"]);
        let coded = mps_names(&["x", "a_very_long_name"], 'C');
        assert_eq!(coded, vec!["C0000000", "C0000001"]);
    }
}
