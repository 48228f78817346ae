#include "qtensor/tensor_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qten {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json entries_to_json(const DenseTensor& a) {
  ordered_json entries = ordered_json::array();
  for (const auto& [idx, v] : a.entries()) {
    ordered_json e;
    e["idx"] = idx;
    e["val"] = to_string(v);
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace

DenseTensor parse_tensor_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("shape") || !j["shape"].is_array())
    throw std::invalid_argument("tensor JSON requires a \"shape\" array");
  std::vector<int> dims;
  for (const auto& d : j["shape"]) {
    if (!d.is_number_integer() || d.get<long long>() < 1)
      throw std::invalid_argument("shape dimensions must be positive integers");
    dims.push_back(d.get<int>());
  }
  DenseTensor t{Shape(dims)};
  if (!j.contains("entries")) return t;
  if (!j["entries"].is_array()) throw std::invalid_argument("\"entries\" must be an array");
  std::set<Index> seen;
  for (const auto& e : j["entries"]) {
    if (!e.is_object() || !e.contains("idx") || !e.contains("val"))
      throw std::invalid_argument("each entry requires \"idx\" and \"val\"");
    Index idx;
    for (const auto& c : e["idx"]) {
      if (!c.is_number_integer()) throw std::invalid_argument("entry index must be integer");
      idx.push_back(c.get<int>());
    }
    if (!t.shape().contains(idx))
      throw std::invalid_argument("entry index out of range or of wrong length");
    Rational v;
    if (e["val"].is_string())
      v = parse_rational(e["val"].get<std::string>());
    else if (e["val"].is_number_integer())
      v = make_rational(long(e["val"].get<long long>()));
    else
      throw std::invalid_argument("entry value must be an integer or a rational string");
    if (!seen.insert(idx).second) throw std::invalid_argument("duplicate entry index");
    t.set(idx, v);  // explicit zeros are dropped
  }
  return t;
}

DenseTensor load_tensor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tensor_json(buf.str());
}

std::string tensor_to_json(const DenseTensor& a, bool pretty) {
  ordered_json j;
  j["shape"] = a.shape().dims;
  j["entries"] = entries_to_json(a);
  return pretty ? j.dump(2) : j.dump();
}

std::string sign_tensor_to_json(const SignTensor& s, bool pretty) {
  return tensor_to_json(s.unit_member(), pretty);
}

void save_tensor_file(const DenseTensor& a, const std::string& path, bool pretty) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << tensor_to_json(a, pretty) << "\n";
}

}  // namespace qten
