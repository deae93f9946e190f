//! Netlist JSON.
//!
//! ```json
//! {
//!   "inputs": 2,
//!   "outputs": ["g0", "g1"],
//!   "gates": [
//!     {
//!       "id": 0,
//!       "kind": "EXOR",
//!       "truth": "0110",
//!       "cell": [0, 0],
//!       "sources": [{ "from": "in0", "inverted": false }, { "from": "in1", "inverted": false }]
//!     }
//!   ]
//! }
//! ```
//!
//! Signals are named `in<i>` for primary inputs and `g<id>` for gates. `cell`
//! (level, position) is present for gates decoded from an array.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{NetGate, NetSource, Netlist, NodeRef};
use crate::gatelib::GateKind;
use crate::geometry::Cell;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetlistDoc {
    inputs: usize,
    outputs: Vec<String>,
    gates: Vec<GateDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateDoc {
    id: usize,
    kind: String,
    truth: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cell: Option<(usize, usize)>,
    sources: Vec<SourceDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceDoc {
    from: String,
    inverted: bool,
}

fn node_name(node: NodeRef) -> String {
    match node {
        NodeRef::Input(i) => format!("in{i}"),
        NodeRef::Gate(g) => format!("g{g}"),
    }
}

fn parse_node(name: &str) -> Result<NodeRef> {
    let bad = || Error::Netlist(format!("bad signal name {name:?}"));
    if let Some(i) = name.strip_prefix("in") {
        i.parse().map(NodeRef::Input).map_err(|_| bad())
    } else if let Some(g) = name.strip_prefix('g') {
        g.parse().map(NodeRef::Gate).map_err(|_| bad())
    } else {
        Err(bad())
    }
}

/// Pretty-printed JSON with a fixed key order.
pub fn emit_netlist(nl: &Netlist) -> String {
    let doc = NetlistDoc {
        inputs: nl.n_inputs(),
        outputs: nl.outputs().iter().map(|&o| node_name(o)).collect(),
        gates: nl
            .gates()
            .iter()
            .enumerate()
            .map(|(id, g)| GateDoc {
                id,
                kind: g.kind.name().to_string(),
                truth: g.kind.truth_vector(),
                cell: g.cell.map(|c| (c.level, c.position)),
                sources: g
                    .sources
                    .iter()
                    .map(|s| SourceDoc {
                        from: node_name(s.node),
                        inverted: s.inverted,
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("netlist serializes");
    text.push('\n');
    text
}

pub fn parse_netlist(text: &str) -> Result<Netlist> {
    let doc: NetlistDoc = serde_json::from_str(text).map_err(|e| Error::Netlist(e.to_string()))?;
    let mut gates = Vec::with_capacity(doc.gates.len());
    for (i, g) in doc.gates.into_iter().enumerate() {
        if g.id != i {
            return Err(Error::Netlist(format!("gate ids must be 0, 1, ..; found {} at position {i}", g.id)));
        }
        let kind = GateKind::new(&g.kind, &g.truth)?;
        let sources = g
            .sources
            .iter()
            .map(|s| {
                Ok(NetSource {
                    node: parse_node(&s.from)?,
                    inverted: s.inverted,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        gates.push(NetGate {
            kind,
            sources,
            cell: g.cell.map(|(l, p)| Cell::new(l, p)),
        });
    }
    let outputs = doc
        .outputs
        .iter()
        .map(|o| parse_node(o))
        .collect::<Result<Vec<_>>>()?;
    Netlist::new(doc.inputs, gates, outputs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_netlist_has_no_gates() {
        let nl = Netlist::new(2, vec![], vec![NodeRef::Input(1)]).unwrap();
        let text = emit_netlist(&nl);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["gates"], serde_json::json!([]));
        assert_eq!(v["outputs"], serde_json::json!(["in1"]));
        assert_eq!(parse_netlist(&text).unwrap(), nl);
    }

    #[test]
    fn key_order_is_stable() {
        let nl = Netlist::new(
            1,
            vec![NetGate {
                kind: GateKind::not(),
                sources: vec![NetSource {
                    node: NodeRef::Input(0),
                    inverted: true,
                }],
                cell: Some(Cell::new(0, 1)),
            }],
            vec![NodeRef::Gate(0)],
        )
        .unwrap();
        let text = emit_netlist(&nl);
        let keys = ["\"inputs\"", "\"outputs\"", "\"gates\"", "\"id\"", "\"kind\"", "\"truth\"", "\"cell\"", "\"sources\"", "\"from\"", "\"inverted\""];
        let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{text}");
        assert_eq!(parse_netlist(&text).unwrap(), nl);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(parse_netlist("{").is_err());
        assert!(parse_netlist(r#"{"inputs":1,"outputs":["x0"],"gates":[]}"#).is_err());
        assert!(parse_netlist(r#"{"inputs":1,"outputs":["in3"],"gates":[]}"#).is_err());
        let wrong_id = r#"{"inputs":1,"outputs":["g1"],"gates":[{"id":1,"kind":"NOT","truth":"10","sources":[{"from":"in0","inverted":false}]}]}"#;
        assert!(parse_netlist(wrong_id).is_err());
        let extra = r#"{"inputs":1,"outputs":["in0"],"gates":[],"note":1}"#;
        assert!(parse_netlist(extra).is_err());
    }
}
