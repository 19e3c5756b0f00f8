#pragma once

// Text formats. Configuration documents are JSON; complex numbers are written
// as [re, im] pairs (a bare number is accepted as a real value).
//
// TransferSpec:
//   { "system":    [{"label": "S", "dim": 2}],
//     "apparatus": [{"label": "A", "dim": 2}],
//     "ready":     [[1,0],[0,0]],
//     "branches":  [{"in": [...], "out": [...], "record": [...]}, ...] }
//
// ChainConfig:
//   { "system": {"label": "S", "dim": 2},
//     "v": [...], "w": [...],
//     "links": [{"label": "A", "dim": 2,
//                "source": "S",            (optional, default system)
//                "ready": [...],           (optional, default |0>)
//                "unitary": "identity" | "controlled_shift" | {"haar_seed": 7}
//                           | [[[re,im], ...], ...]  (row-major matrix) }] }

#include <string>
#include <string_view>

#include "pointerlab/chain.hpp"
#include "pointerlab/channel.hpp"

namespace pointerlab::io {

/// Shortest round-trip decimal ("%.17g"); infinities as "inf"/"-inf".
std::string format_real(double x);

/// Throws ConfigError (malformed document) or the layout/invariant errors of
/// the constructed types.
channel::TransferSpec parse_transfer_spec(std::string_view text);
std::string dump_transfer_spec(const channel::TransferSpec& spec);

chain::ChainConfig parse_chain_config(std::string_view text);
/// Links are written with explicit unitary matrices.
std::string dump_chain_config(const chain::ChainConfig& config);

/// Throws ConfigError when the file cannot be read.
std::string read_file(const std::string& path);
/// Throws Error when the file cannot be written.
void write_file(const std::string& path, std::string_view contents);

}  // namespace pointerlab::io
