// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "acra/core.hpp"
#include "acra/gadgets.hpp"
#include "acra/games.hpp"
#include "acra/invariants.hpp"
#include "acra/sepgraph.hpp"

namespace acra {

using Json = nlohmann::ordered_json;

/// The file could not be read or is not a JSON document.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

Json read_json_file(const std::string& path);
Json parse_json(const std::string& text);

/// Integers go out as JSON numbers when they fit in 64 bits, else as decimal
/// strings; both forms are accepted on input.
Json int_to_json(const Int& x);
Int int_from_json(const Json& j);

/// Descriptions are validated while parsing; problems raise ValidationError.
Acra acra_from_json(const Json& j);
Json acra_to_json(const Acra& acra);

AcraGame game_from_json(const Json& j);
Json game_to_json(const AcraGame& game);

Dfa dfa_from_json(const Json& j);
Json dfa_to_json(const Dfa& dfa);

AltTm alt_tm_from_json(const Json& j);
Json alt_tm_to_json(const AltTm& tm);

TwoCounterProgram two_counter_from_json(const Json& j);
Json two_counter_to_json(const TwoCounterProgram& prog);

Json wfi_to_json(const Acra& acra, const Wfi& d);
Json invariants_to_json(const Acra& acra, const InvariantMap& invs);

Json pump_witness_to_json(const Acra& acra, const PumpWitness& w);

} // namespace acra
