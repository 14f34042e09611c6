// Copyright 2026 The Embezzle Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EMBEZZLE_SERIALIZE_HPP
#define EMBEZZLE_SERIALIZE_HPP

#include <json.hpp>
#include <string>

#include "embezzle/certify.hpp"
#include "embezzle/errors.hpp"
#include "embezzle/protocols.hpp"
#include "embezzle/universal.hpp"

namespace embezzle {

using Json = nlohmann::json;

NLOHMANN_JSON_SERIALIZE_ENUM(Party, {{Party::A, "A"}, {Party::B, "B"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Role, {{Role::catalyst_copy, "catalyst_copy"},
                                    {Role::ancilla, "ancilla"},
                                    {Role::output, "output"}})
NLOHMANN_JSON_SERIALIZE_ENUM(ProtocolForm, {{ProtocolForm::standard, "standard"},
                                            {ProtocolForm::no_input, "no_input"}})

void to_json(Json &j, const SiteId &s);
void from_json(const Json &j, SiteId &s);
void to_json(Json &j, const ShiftRule &r);
void from_json(const Json &j, ShiftRule &r);
void to_json(Json &j, const SiteMap &m);
void from_json(const Json &j, SiteMap &m);
void to_json(Json &j, const SiteOperator &op);
void from_json(const Json &j, SiteOperator &op);
void to_json(Json &j, const CopyTail &t);
void from_json(const Json &j, CopyTail &t);
void to_json(Json &j, const LazyProductState &s);
void from_json(const Json &j, LazyProductState &s);
void to_json(Json &j, const StructuredIsometry &v);
void from_json(const Json &j, StructuredIsometry &v);
void to_json(Json &j, const TargetState &g);
void to_json(Json &j, const ProtocolBundle &b);
void from_json(const Json &j, ProtocolBundle &b);
void to_json(Json &j, const RelationReport &r);
void to_json(Json &j, const RationalVector &v);
void from_json(const Json &j, RationalVector &v);
void to_json(Json &j, const RationalSchmidtFamily &f);
void from_json(const Json &j, RationalSchmidtFamily &f);
void to_json(Json &j, const CertificationReport &r);
void from_json(const Json &j, CertificationReport &r);
void to_json(Json &j, const SimultaneousReport &r);
void from_json(const Json &j, SimultaneousReport &r);

TargetState target_from_json(const Json &j);

// Canonical text: sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const Json &j);

// Throws ParseError carrying line and column.
Json parse_json_text(const std::string &text);

template <typename T>
T decode(const Json &j) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

}  // namespace embezzle

namespace nlohmann {
template <>
struct adl_serializer<embezzle::TargetState> {
    static embezzle::TargetState from_json(const json &j) { return embezzle::target_from_json(j); }
    static void to_json(json &j, const embezzle::TargetState &g) { embezzle::to_json(j, g); }
};
}  // namespace nlohmann

#endif
