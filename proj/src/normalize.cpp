#include <istream>
#include <ostream>

#include "json.hpp"

#include "pidpoker/handparse.hpp"

namespace pidpoker::hh {

using ojson = nlohmann::ordered_json;

namespace {

ojson card_list(std::span<const cards::Card> cs) {
  ojson arr = ojson::array();
  for (const auto c : cs) arr.push_back(c.to_string());
  return arr;
}

[[noreturn]] void schema_fail(const std::string& what) { throw SchemaError(what); }

const ojson& field(const ojson& obj, const char* key, ojson::value_t type) {
  if (!obj.is_object()) schema_fail("expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_fail(std::string("missing field ") + key);
  const bool ok = it->type() == type ||
                  (type == ojson::value_t::number_integer &&
                   it->type() == ojson::value_t::number_unsigned);
  if (!ok) schema_fail(std::string("wrong type for ") + key);
  return *it;
}

std::string str(const ojson& obj, const char* key) {
  return field(obj, key, ojson::value_t::string).get<std::string>();
}

Cents integer(const ojson& obj, const char* key) {
  return field(obj, key, ojson::value_t::number_integer).get<Cents>();
}

const ojson& array(const ojson& obj, const char* key) {
  return field(obj, key, ojson::value_t::array);
}

cards::Card card(const ojson& v) {
  if (!v.is_string()) schema_fail("card must be a string");
  try {
    return cards::Card::parse(v.get<std::string>());
  } catch (const cards::CardError& e) {
    schema_fail(e.what());
  }
}

}  // namespace

std::string schema_header() {
  ojson h;
  h["schema"] = "pidpoker.hand_record";
  h["version"] = kSchemaVersion;
  return h.dump();
}

std::string normalize(const HandRecord& r) {
  ojson j;
  j["hand_id"] = r.hand_id;
  j["timestamp"] = r.timestamp;
  j["blind_cents"] = r.blind;
  j["seats"] = ojson::array();
  for (const auto& s : r.seats) {
    ojson seat;
    seat["player"] = s.player;
    seat["seat"] = s.seat;
    seat["stack_cents"] = s.stack;
    seat["won_cents"] = s.won;
    j["seats"].push_back(std::move(seat));
  }
  j["streets"] = ojson::array();
  for (const auto& st : r.streets) {
    ojson street;
    street["name"] = to_string(st.name);
    street["board"] = card_list(st.board);
    street["actions"] = ojson::array();
    for (const auto& a : st.actions) {
      ojson act;
      act["player"] = a.player;
      act["kind"] = to_string(a.kind);
      act["amount_cents"] = a.amount;
      street["actions"].push_back(std::move(act));
    }
    j["streets"].push_back(std::move(street));
  }
  j["showdown"] = ojson::array();
  for (const auto& rev : r.showdown) {
    ojson reveal;
    reveal["player"] = rev.player;
    reveal["cards"] = card_list(rev.cards);
    j["showdown"].push_back(std::move(reveal));
  }
  j["pot_cents"] = r.pot;
  j["rake_cents"] = r.rake;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

HandRecord read_normalized(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  ojson j;
  try {
    j = ojson::parse(line);
  } catch (const ojson::exception& e) {
    schema_fail(std::string("not valid JSON: ") + e.what());
  }
  HandRecord r;
  r.hand_id = str(j, "hand_id");
  r.timestamp = str(j, "timestamp");
  r.blind = integer(j, "blind_cents");
  for (const auto& s : array(j, "seats")) {
    r.seats.push_back(SeatRecord{str(s, "player"), static_cast<int>(integer(s, "seat")),
                                 integer(s, "stack_cents"), integer(s, "won_cents")});
  }
  for (const auto& st : array(j, "streets")) {
    StreetRecord street;
    const auto name = street_from_string(str(st, "name"));
    if (!name) schema_fail("unknown street name");
    street.name = *name;
    for (const auto& c : array(st, "board")) street.board.push_back(card(c));
    for (const auto& a : array(st, "actions")) {
      const auto kind = action_kind_from_string(str(a, "kind"));
      if (!kind) schema_fail("unknown action kind");
      street.actions.push_back(ActionRecord{str(a, "player"), *kind, integer(a, "amount_cents")});
    }
    r.streets.push_back(std::move(street));
  }
  for (const auto& rev : array(j, "showdown")) {
    const auto& cs = array(rev, "cards");
    if (cs.size() != 2) schema_fail("a reveal holds two cards");
    r.showdown.push_back(Reveal{str(rev, "player"), {card(cs[0]), card(cs[1])}});
  }
  r.pot = integer(j, "pot_cents");
  r.rake = integer(j, "rake_cents");

  // Strict: the line must be exactly the canonical rendering.
  if (normalize(r) != line) schema_fail("record is not in canonical form");
  if (const auto msg = check_invariants(r)) schema_fail(*msg);
  return r;
}

void write_records(std::ostream& out, const std::vector<HandRecord>& records,
                   std::string_view meta_json) {
  if (meta_json.empty()) {
    out << schema_header() << '\n';
  } else {
    ojson h = ojson::parse(schema_header());
    h["meta"] = ojson::parse(meta_json);
    out << h.dump() << '\n';
  }
  for (const auto& r : records) out << normalize(r) << '\n';
}

std::vector<HandRecord> read_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) schema_fail("missing schema header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ojson header;
  try {
    header = ojson::parse(line);
  } catch (const ojson::exception&) {
    schema_fail("unreadable schema header");
  }
  const ojson expected = ojson::parse(schema_header());
  if (!header.is_object() || header.value("schema", ojson()) != expected["schema"] ||
      header.value("version", ojson()) != expected["version"]) {
    schema_fail("unsupported schema header: " + line);
  }
  std::vector<HandRecord> records;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      records.push_back(read_normalized(line));
    } catch (const SchemaError& e) {
      throw SchemaError("line " + std::to_string(n) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace pidpoker::hh
