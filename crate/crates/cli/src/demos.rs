//! Registry of named fixture reproductions.

use serde::Serialize;

use crate::checks::{self, Check};

pub struct Demo {
    pub name: &'static str,
    pub summary: &'static str,
    pub run: fn() -> csp_comm::Result<Check>,
}

pub const DEMOS: &[Demo] = &[
    Demo {
        name: "power-identities",
        summary: "Alice and Bob powers of cliques, NAE and rainbow templates are again such templates",
        run: checks::power_identities,
    },
    Demo {
        name: "alice-channel-oracle",
        summary: "brute-force Alice-channel strategies exist iff X maps to the Alice power",
        run: checks::alice_channel_oracle,
    },
    Demo {
        name: "bob-channel-oracle",
        summary: "brute-force Bob-channel strategies exist iff X maps to the Bob power",
        run: checks::bob_channel_oracle,
    },
    Demo {
        name: "four-ary-bob-only",
        summary: "a 4-ary instance won with two Bob messages but not with up to three Alice messages",
        run: checks::four_ary_bob_only,
    },
    Demo {
        name: "one-bit-predicates",
        summary: "core-based one-bit predicates agree with the direct power test",
        run: checks::one_bit_predicates,
    },
    Demo {
        name: "edge-vs-arc",
        summary: "an edge against a single arc: Alice can win with two messages, Bob cannot",
        run: checks::edge_versus_arc,
    },
    Demo {
        name: "covering-arrays",
        summary: "covering arrays for n in 4..=20 verify exhaustively; column counts reported",
        run: checks::covering_arrays_fixture,
    },
    Demo {
        name: "clique-embeddings",
        summary: "clique embeddings into Alice powers are homomorphisms",
        run: checks::clique_embeddings,
    },
    Demo {
        name: "central-vertices",
        summary: "the Bob-power embedding exists iff a central vertex exists",
        run: checks::central_vertex_embeddings,
    },
    Demo {
        name: "quantum-layer",
        summary: "PVM validation, the product criterion, and the equality certificate",
        run: checks::quantum_layer,
    },
    Demo {
        name: "quantum-verifier",
        summary: "quantum and classical verifiers agree on embedded and tampered strategies",
        run: checks::quantum_verifier,
    },
    Demo {
        name: "geometry",
        summary: "adjacent frames, certified sphere colorings and frame colorings",
        run: checks::geometry,
    },
];

#[derive(Debug, Serialize)]
pub struct Report {
    pub name: &'static str,
    pub summary: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
    pub elapsed_ms: u128,
}

pub fn find(name: &str) -> Option<&'static Demo> {
    DEMOS.iter().find(|d| d.name == name)
}

/// Runs a demo; an error inside the check counts as a failure.
pub fn run(demo: &Demo) -> Report {
    let (passed, details, elapsed_ms) = match (demo.run)() {
        Ok(c) => (c.passed, c.details, c.elapsed_ms),
        Err(e) => (false, vec![format!("error: {e}")], 0),
    };
    Report { name: demo.name, summary: demo.summary, passed, details, elapsed_ms }
}

impl Report {
    pub fn render(&self) -> String {
        let mut out = format!(
            "[{}] {}: {} ({} ms)\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.summary,
            self.elapsed_ms
        );
        for line in &self.details {
            out.push_str(&format!("    {line}\n"));
        }
        out
    }
}
