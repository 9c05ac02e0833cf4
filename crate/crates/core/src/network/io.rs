use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::network::{Arc, RoadNetwork};
use crate::scalar::Scalar;

/// Accumulates `nodes` and `arc` records; shared with the instance reader.
#[derive(Debug, Default)]
pub(crate) struct NetworkRecords<S> {
    nodes: Option<usize>,
    arcs: Vec<Arc<S>>,
}

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub(crate) fn field<T: std::str::FromStr>(tokens: &[&str], k: usize, line: usize, what: &str) -> Result<T> {
    tokens
        .get(k)
        .ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| parse_err(line, format!("bad {what} '{}'", tokens[k])))
}

impl<S: Scalar> NetworkRecords<S> {
    pub(crate) fn new() -> Self {
        NetworkRecords { nodes: None, arcs: Vec::new() }
    }

    /// Returns false if the record is not a network record.
    pub(crate) fn accept(&mut self, tokens: &[&str], line: usize) -> Result<bool> {
        match tokens[0] {
            "nodes" => {
                if tokens.len() != 2 {
                    return Err(parse_err(line, "expected `nodes <n>`"));
                }
                if self.nodes.is_some() {
                    return Err(parse_err(line, "duplicate `nodes` record"));
                }
                self.nodes = Some(field(tokens, 1, line, "node count")?);
            }
            "arc" => {
                if tokens.len() != 5 {
                    return Err(parse_err(line, "expected `arc <tail> <head> <cost> <travel_time>`"));
                }
                let tail = field(tokens, 1, line, "tail")?;
                let head = field(tokens, 2, line, "head")?;
                let cost = S::parse_decimal(tokens[3]).ok_or_else(|| parse_err(line, format!("bad cost '{}'", tokens[3])))?;
                // Fractional travel times are rounded up.
                let time = S::parse_decimal(tokens[4])
                    .ok_or_else(|| parse_err(line, format!("bad travel time '{}'", tokens[4])))?
                    .ceil_i64();
                self.arcs.push(Arc::new(tail, head, cost, time));
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    pub(crate) fn finish(self) -> Result<RoadNetwork<S>> {
        let nodes = self.nodes.ok_or_else(|| parse_err(1, "missing `nodes` record"))?;
        RoadNetwork::new(nodes, self.arcs)
    }
}

/// Non-empty, non-comment lines split into tokens, with 1-based line numbers.
pub(crate) fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((k + 1, tokens))
    })
}

pub fn parse_network<S: Scalar>(text: &str) -> Result<RoadNetwork<S>> {
    let mut rec = NetworkRecords::new();
    for (line, tokens) in records(text) {
        if !rec.accept(&tokens, line)? {
            return Err(parse_err(line, format!("unknown record '{}'", tokens[0])));
        }
    }
    rec.finish()
}

pub fn write_network<S: Scalar>(net: &RoadNetwork<S>) -> String {
    let mut out = format!("nodes {}\n", net.num_nodes());
    for a in net.arcs() {
        let _ = writeln!(out, "arc {} {} {} {}", a.tail, a.head, a.cost.to_text(), a.time);
    }
    out
}

pub fn load_network<S: Scalar>(path: impl AsRef<Path>) -> Result<RoadNetwork<S>> {
    parse_network(&std::fs::read_to_string(path)?)
}

pub fn save_network<S: Scalar>(net: &RoadNetwork<S>, path: impl AsRef<Path>) -> Result<()> {
    Ok(std::fs::write(path, write_network(net))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn round_trip_is_byte_identical() {
        let text = "nodes 3\narc 0 1 0.99 2\narc 1 0 1.5 2\narc 1 2 7/3 4\n";
        let net: RoadNetwork<Rational64> = parse_network(text).unwrap();
        assert_eq!(write_network(&net), text);
        assert_eq!(parse_network::<Rational64>(&write_network(&net)).unwrap(), net);
    }

    #[test]
    fn fractional_times_round_up() {
        let net: RoadNetwork<f64> = parse_network("# comment\nnodes 2\narc 0 1 1 2.01\n").unwrap();
        assert_eq!(net.arc(0).time, 3);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_network::<f64>("nodes 2\n\narc 0 1 x 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_network::<f64>("nodes 2\n"), Err(Error::Validation(_))));
        assert!(matches!(parse_network::<f64>("nodes 2\nedge 0 1\n"), Err(Error::Parse { line: 2, .. })));
    }
}
