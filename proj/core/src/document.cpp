#include "col/document.hpp"

#include <fstream>
#include <sstream>

#include "codec.hpp"

namespace col {

using codec::json;
using codec::Reader;

namespace {

std::string summarize(const std::vector<Violation>& violations) {
  std::string out = std::to_string(violations.size()) + " violation(s)";
  for (const auto& v : violations) out += "; " + v.element + ": " + v.invariant + " (" + v.detail + ")";
  return out;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json encode_feature(const FeatureDef& f) {
  json out{{"name", f.name}, {"kind", std::string(to_string(f.kind))}, {"values", f.values},
           {"owner", f.owner}, {"classifier", f.classifier}};
  if (f.is_numeric()) {
    out["unit"] = f.unit;
    out["min"] = optional_number(f.min);
    out["max"] = optional_number(f.max);
    out["bins"] = f.bins;
  }
  return out;
}

json encode_classifier(const HistogramClassifier& c) {
  json out{{"id", c.id()},
           {"feature", c.feature()},
           {"mode", c.mode() == ClassifierMode::supervised ? "supervised" : "unsupervised"},
           {"alpha", c.alpha()},
           {"bins", c.bins()}};
  if (c.mode() == ClassifierMode::supervised) {
    json classes = json::object();
    for (const auto& [cls, h] : c.class_histograms()) classes[cls] = h;
    out["classes"] = classes;
  } else {
    out["counts"] = c.counts();
  }
  return out;
}

json encode_frame(const Frame& f) {
  json rules = json::array();
  for (const auto& r : f.rules) rules.push_back(codec::to_json(r));
  return {{"name", f.name},           {"source", f.source},   {"target", f.target},
          {"inputs", f.inputs},       {"outputs", f.outputs}, {"externals", f.externals},
          {"rules", rules}};
}

FeatureDef decode_feature(const Reader& r) {
  FeatureDef f;
  f.name = r.at("name").str();
  const Reader kind = r.at("kind");
  const auto k = parse_feature_kind(kind.str());
  if (!k) kind.fail("unknown feature kind");
  f.kind = *k;
  if (r.has("values")) f.values = r.at("values").strings();
  if (r.has("owner")) f.owner = r.at("owner").str();
  if (r.has("classifier")) f.classifier = r.at("classifier").str();
  if (r.has("unit")) f.unit = r.at("unit").str();
  if (r.has("min") && !r.at("min").raw().is_null()) f.min = r.at("min").num();
  if (r.has("max") && !r.at("max").raw().is_null()) f.max = r.at("max").num();
  if (r.has("bins")) f.bins = r.at("bins").u64();
  return f;
}

Histogram histogram(const Reader& r) {
  Histogram h;
  for (std::size_t i = 0; i < r.size(); ++i) h.push_back(r.at(i).u64());
  return h;
}

HistogramClassifier decode_classifier(const Reader& r) {
  const Reader mode = r.at("mode");
  const std::string m = mode.str();
  if (m != "supervised" && m != "unsupervised") mode.fail("expected \"supervised\" or \"unsupervised\"");
  const bool supervised = m == "supervised";
  std::vector<std::string> classes;
  if (supervised) classes = r.at("classes").keys();
  const auto bins = r.at("bins").strings();
  try {
    HistogramClassifier c(r.at("id").str(), r.at("feature").str(), bins,
                          supervised ? ClassifierMode::supervised : ClassifierMode::unsupervised, classes,
                          r.at("alpha").num());
    if (supervised) {
      for (const auto& cls : classes) {
        const Reader h = r.at("classes").at(cls.c_str());
        if (h.size() != bins.size()) h.fail("histogram length differs from the bin count");
        c.set_class_counts(cls, histogram(h));
      }
    } else {
      const Reader h = r.at("counts");
      if (h.size() != bins.size()) h.fail("histogram length differs from the bin count");
      c.set_counts(histogram(h));
    }
    return c;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::FormatError) throw;
    r.fail(e.detail());
  }
}

Concept decode_concept(const Reader& r) {
  Concept c;
  c.id = r.at("id").str();
  c.name = r.at("name").str();
  const Reader classes = r.at("classes");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const Reader cls = classes.at(i);
    ConceptClass cc{cls.at("name").str(), cls.at("support").u64()};
    if (!c.classes.emplace(cc.name, cc).second) cls.fail("duplicate class");
  }
  for (const auto& f : r.at("features").strings()) c.features.insert(f);
  for (const auto& s : r.at("subconcepts").strings()) c.subconcepts.insert(s);
  return c;
}

Frame decode_frame(const Reader& r) {
  Frame f;
  f.name = r.at("name").str();
  f.source = r.at("source").str();
  f.target = r.at("target").str();
  f.inputs = r.at("inputs").strings();
  f.outputs = r.at("outputs").strings();
  f.externals = r.at("externals").strings();
  const Reader rules = r.at("rules");
  for (std::size_t i = 0; i < rules.size(); ++i) f.rules.push_back(codec::rule_from_json(rules.at(i)));
  return f;
}

json parse_json(std::string_view text, ErrorCode code) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(code, "/: malformed JSON at byte " + std::to_string(e.byte));
  }
}

}  // namespace

InvalidKbError::InvalidKbError(std::vector<Violation> violations)
    : Error(ErrorCode::InvalidKb, summarize(violations)), violations_(std::move(violations)) {}

std::string to_document(const KnowledgeBase& kb) {
  const KbData& d = kb.data();
  json concepts = json::array();
  for (const auto& [name, c] : d.concepts) {
    json classes = json::array();
    for (const auto& [cn, cc] : c.classes) classes.push_back({{"name", cc.name}, {"support", cc.support}});
    concepts.push_back({{"id", c.id},
                        {"name", c.name},
                        {"classes", classes},
                        {"features", c.features},
                        {"subconcepts", c.subconcepts}});
  }
  json features = json::array();
  for (const auto& [name, f] : d.features) features.push_back(encode_feature(f));
  json classifiers = json::array();
  for (const auto& [id, c] : d.classifiers) classifiers.push_back(encode_classifier(c));
  json frames = json::array();
  for (const auto& [name, f] : d.frames) frames.push_back(encode_frame(f));
  json values = json::object();
  for (const auto& [name, v] : d.dictionaries.features) values[name] = v;

  json doc{{"version", std::string(kDocumentVersion)},
           {"revision", d.revision},
           {"next_ids", {{"concept", d.next_concept}, {"classifier", d.next_classifier}}},
           {"constants", d.constants},
           {"concepts", concepts},
           {"features", features},
           {"classifiers", classifiers},
           {"frames", frames},
           {"dictionaries",
            {{"u_concepts", d.dictionaries.u_concepts},
             {"concepts", d.dictionaries.concepts},
             {"features", values}}}};
  return doc.dump(2) + "\n";
}

KnowledgeBase from_document(std::string_view text) {
  const json doc = parse_json(text, ErrorCode::FormatError);
  const Reader root(doc, "");
  const Reader version = root.at("version");
  if (version.str() != kDocumentVersion) version.fail("unsupported version \"" + version.str() + "\"");

  KbData d;
  d.revision = root.at("revision").u64();
  d.next_concept = root.at("next_ids").at("concept").u64();
  d.next_classifier = root.at("next_ids").at("classifier").u64();
  d.constants.clear();
  const Reader constants = root.at("constants");
  for (const auto& k : constants.keys()) d.constants[k] = constants.at(k.c_str()).num();

  const Reader concepts = root.at("concepts");
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    Concept c = decode_concept(concepts.at(i));
    if (!d.concepts.emplace(c.name, c).second) concepts.at(i).fail("duplicate concept");
  }
  const Reader features = root.at("features");
  for (std::size_t i = 0; i < features.size(); ++i) {
    FeatureDef f = decode_feature(features.at(i));
    if (!d.features.emplace(f.name, f).second) features.at(i).fail("duplicate feature");
  }
  const Reader classifiers = root.at("classifiers");
  for (std::size_t i = 0; i < classifiers.size(); ++i) {
    HistogramClassifier c = decode_classifier(classifiers.at(i));
    const std::string id = c.id();
    if (!d.classifiers.emplace(id, std::move(c)).second) classifiers.at(i).fail("duplicate classifier");
  }
  const Reader frames = root.at("frames");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    Frame f = decode_frame(frames.at(i));
    if (!d.frames.emplace(f.name, f).second) frames.at(i).fail("duplicate frame");
  }
  const Reader dict = root.at("dictionaries");
  for (const auto& s : dict.at("u_concepts").strings()) d.dictionaries.u_concepts.insert(s);
  for (const auto& s : dict.at("concepts").strings()) d.dictionaries.concepts.insert(s);
  const Reader values = dict.at("features");
  for (const auto& k : values.keys()) d.dictionaries.features[k] = values.at(k.c_str()).strings();

  // Formulas come back as text; bind variable names to constants the same
  // way add_rule does. A rule that does not bind is left for validate().
  const KnowledgeBase partial = KnowledgeBase::from_data(d);
  for (auto& [name, frame] : d.frames) {
    for (auto& rule : frame.rules) {
      try {
        rule = partial.bind_rule(frame, rule);
      } catch (const Error&) {
      }
    }
  }

  KnowledgeBase kb = KnowledgeBase::from_data(std::move(d));
  auto violations = kb.validate();
  if (!violations.empty()) throw InvalidKbError(std::move(violations));
  return kb;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "error reading " + path.string());
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  // Write beside the target and rename so a failed save never truncates it.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "error writing " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
}

void save_kb(const KnowledgeBase& kb, const std::filesystem::path& destination) {
  write_text_file(destination, to_document(kb));
}

KnowledgeBase load_kb(const std::filesystem::path& source) { return from_document(read_text_file(source)); }

namespace {

void seed_into(KnowledgeBase& kb, const Reader& root) {
  if (root.has("concepts")) {
    const Reader concepts = root.at("concepts");
    for (std::size_t i = 0; i < concepts.size(); ++i) {
      const Reader c = concepts.at(i);
      const std::string name = kb.add_concept(c.at("name").str());
      if (c.has("classes")) {
        const Reader classes = c.at("classes");
        for (std::size_t k = 0; k < classes.size(); ++k) {
          const Reader cls = classes.at(k);
          kb.add_class(name, cls.raw().is_string() ? cls.str() : cls.at("name").str());
        }
      }
    }
    for (std::size_t i = 0; i < concepts.size(); ++i) {
      const Reader c = concepts.at(i);
      if (!c.has("subconcepts")) continue;
      for (const auto& s : c.at("subconcepts").strings()) kb.add_subconcept(c.at("name").str(), s);
    }
  }
  if (root.has("features")) {
    const Reader features = root.at("features");
    for (std::size_t i = 0; i < features.size(); ++i) {
      FeatureDef f = decode_feature(features.at(i));
      const std::string owner = f.owner;
      f.owner.clear();
      f.classifier.clear();
      kb.add_feature(f, owner);
    }
  }
  if (root.has("constants")) {
    const Reader constants = root.at("constants");
    for (const auto& k : constants.keys()) kb.set_constant(k, constants.at(k.c_str()).num());
  }
  if (root.has("frames")) {
    const Reader frames = root.at("frames");
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const Reader fr = frames.at(i);
      FrameSpec spec{fr.at("name").str(), fr.at("source").str(), fr.at("target").str(), {}, {}, {}};
      if (fr.has("inputs")) spec.inputs = fr.at("inputs").strings();
      if (fr.has("outputs")) spec.outputs = fr.at("outputs").strings();
      if (fr.has("externals")) spec.externals = fr.at("externals").strings();
      const std::string name = kb.add_frame(spec);
      if (!fr.has("rules")) continue;
      const Reader rules = fr.at("rules");
      for (std::size_t k = 0; k < rules.size(); ++k) kb.add_rule(name, codec::rule_from_json(rules.at(k)));
    }
  }
}

}  // namespace

KnowledgeBase new_kb(std::optional<std::string_view> seed) {
  if (!seed) return KnowledgeBase{};
  try {
    const json doc = parse_json(*seed, ErrorCode::SeedError);
    KnowledgeBase kb;
    seed_into(kb, Reader(doc, "", ErrorCode::SeedError));
    KbData d = kb.data();
    d.revision = 0;
    return KnowledgeBase::from_data(std::move(d));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SeedError) throw;
    throw Error(ErrorCode::SeedError, std::string(e.what()));
  }
}

}  // namespace col
