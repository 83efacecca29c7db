#include "quadnc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "quadnc/errors.hpp"
#include "quadnc/io.hpp"
#include "quadnc/rng.hpp"
#include "quadnc/sampler.hpp"

namespace quadnc {
namespace {

FamilySpec make_family(StateFamily family) {
    FamilySpec f;
    f.family = family;
    f.label = label_for(family);
    return f;
}

void check_range(const ParamRange& r, const std::string& what) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi)
        throw ConfigError(what + " range is invalid");
}

// Draws the family's free parameters; the draw order per family is fixed so
// a given parameter seed always produces the same state.
StateSpec draw_spec(const FamilySpec& f, Rng& rng, double eta, double phi) {
    switch (f.family) {
    case StateFamily::Coherent:
        return StateSpec::coherent(rng.uniform(f.alpha.lo, f.alpha.hi), eta, phi);
    case StateFamily::Thermal:
        return StateSpec::thermal(rng.uniform(f.nbar.lo, f.nbar.hi), eta, phi);
    case StateFamily::Fock:
        return StateSpec::fock(
            f.n_lo + static_cast<int>(rng.next_below(
                         static_cast<std::uint64_t>(f.n_hi - f.n_lo) + 1)),
            eta, phi);
    case StateFamily::SqueezedCoherent: {
        const double alpha = rng.uniform(f.alpha.lo, f.alpha.hi);
        const double xi = rng.uniform(f.xi.lo, f.xi.hi);
        return StateSpec::squeezed(alpha, xi, eta, phi);
    }
    case StateFamily::Spacs:
        return StateSpec::spacs(rng.uniform(f.alpha.lo, f.alpha.hi), eta, phi);
    case StateFamily::CoherentMixture:
        return StateSpec::mixture(rng.uniform(f.alpha.lo, f.alpha.hi), eta, phi);
    case StateFamily::PhaseAveragedCoherent:
        return StateSpec::phase_averaged(rng.uniform(f.alpha.lo, f.alpha.hi), eta, phi);
    case StateFamily::OddCat:
        return StateSpec::cat(rng.uniform(f.alpha.lo, f.alpha.hi), eta, phi);
    }
    throw InternalError("unhandled family in draw_spec");
}

FamilySpec family_from_json(const nlohmann::json& j) {
    FamilySpec f;
    f.family = family_from_name(j.at("family").get<std::string>());
    f.label = j.at("label").get<int>() == 0 ? ClassLabel::Classical
                                            : ClassLabel::Nonclassical;
    f.alpha = {j.at("alpha").at(0).get<double>(), j.at("alpha").at(1).get<double>()};
    f.nbar = {j.at("nbar").at(0).get<double>(), j.at("nbar").at(1).get<double>()};
    f.n_lo = j.at("n").at(0).get<int>();
    f.n_hi = j.at("n").at(1).get<int>();
    f.xi = {j.at("xi").at(0).get<double>(), j.at("xi").at(1).get<double>()};
    return f;
}

} // namespace

CorpusConfig default_training_config() {
    CorpusConfig cfg;

    FamilySpec coherent = make_family(StateFamily::Coherent);
    coherent.alpha = {-5.0, 5.0};

    FamilySpec thermal = make_family(StateFamily::Thermal);
    thermal.nbar = {0.0, 5.0};

    FamilySpec mixture = make_family(StateFamily::CoherentMixture);
    mixture.alpha = {-5.0, 5.0};

    FamilySpec fock = make_family(StateFamily::Fock);
    fock.n_lo = 1;
    fock.n_hi = 6;

    FamilySpec squeezed = make_family(StateFamily::SqueezedCoherent);
    squeezed.alpha = {-5.0, 5.0};
    squeezed.xi = {0.5, 1.0};

    FamilySpec spacs = make_family(StateFamily::Spacs);
    spacs.alpha = {-3.0, 3.0};

    cfg.families = {coherent, thermal, mixture, fock, squeezed, spacs};
    return cfg;
}

void validate(const CorpusConfig& cfg) {
    if (cfg.families.empty())
        throw ConfigError("the corpus needs at least one family");
    if (cfg.vectors_per_family < 1)
        throw ConfigError("vectors_per_family must be at least 1");
    if (cfg.events_per_vector < 1)
        throw ConfigError("events_per_vector must be at least 1");
    if (!(cfg.eta > 0.0 && cfg.eta <= 1.0))
        throw ConfigError("eta must lie in (0, 1]");
    if (!std::isfinite(cfg.phi))
        throw ConfigError("phi must be finite");
    if (cfg.jobs < 1)
        throw ConfigError("jobs must be at least 1");
    bool classical = false, nonclassical = false;
    for (const FamilySpec& f : cfg.families) {
        if (f.label != label_for(f.family))
            throw ConfigError(std::string(family_name(f.family)) +
                              " carries the wrong class label");
        if (f.label == ClassLabel::Classical)
            classical = true;
        else
            nonclassical = true;
        check_range(f.alpha, std::string(family_name(f.family)) + " alpha");
        check_range(f.nbar, std::string(family_name(f.family)) + " nbar");
        check_range(f.xi, std::string(family_name(f.family)) + " xi");
        if (f.family == StateFamily::Fock &&
            (f.n_lo < 0 || f.n_hi < f.n_lo || f.n_hi > 12))
            throw ConfigError("fock n range must satisfy 0 <= lo <= hi <= 12");
    }
    if (!classical || !nonclassical)
        throw ConfigError("the corpus needs both a classical and a nonclassical family");
}

Corpus generate_corpus(const CorpusConfig& cfg) {
    validate(cfg);
    const std::size_t per_family = static_cast<std::size_t>(cfg.vectors_per_family);
    const std::size_t total = cfg.families.size() * per_family;

    Corpus corpus;
    corpus.features.resize(total);
    corpus.labels.resize(total);
    corpus.provenance.resize(total);

    parallel_for(total, cfg.jobs, [&](std::size_t idx) {
        const FamilySpec& fam = cfg.families[idx / per_family];
        const std::uint64_t child = derive_seed(cfg.master_seed, idx);
        Rng param_rng(derive_seed(child, 0));
        const StateSpec spec = draw_spec(fam, param_rng, cfg.eta, cfg.phi);
        const std::uint64_t event_seed = derive_seed(child, 1);

        const SamplerTable table = build_table(spec);
        const QuadratureBatch batch =
            sample(table, static_cast<std::size_t>(cfg.events_per_vector), event_seed);
        corpus.features[idx] = featurize(batch);
        corpus.labels[idx] = fam.label;
        corpus.provenance[idx] = {spec, event_seed};
    });
    return corpus;
}

CorpusConfig ablated_config(const std::string& exclude_tag) {
    return ablated_config(default_training_config(), exclude_tag);
}

CorpusConfig ablated_config(CorpusConfig base, const std::string& exclude_tag) {
    StateFamily target;
    try {
        target = family_from_name(exclude_tag);
    } catch (const Error&) {
        std::string tags;
        for (const std::string& t : family_names()) {
            if (!tags.empty())
                tags += ", ";
            tags += t;
        }
        throw ConfigError("unknown family '" + exclude_tag + "' (valid: " + tags + ")");
    }
    const auto it = std::find_if(base.families.begin(), base.families.end(),
                                 [&](const FamilySpec& f) { return f.family == target; });
    if (it == base.families.end())
        throw ConfigError("family '" + exclude_tag + "' is not part of the configuration");
    const ClassLabel label = it->label;
    int with_label = 0;
    for (const FamilySpec& f : base.families)
        if (f.label == label)
            ++with_label;
    if (with_label <= 1)
        throw ConfigError("cannot remove '" + exclude_tag +
                          "': it is the last family of its class");
    base.families.erase(it);
    return base;
}

CorpusConfig swap_classical_variant(CorpusConfig cfg, bool use_phase_averaged) {
    const StateFamily target = use_phase_averaged ? StateFamily::PhaseAveragedCoherent
                                                  : StateFamily::CoherentMixture;
    const StateFamily other = use_phase_averaged ? StateFamily::CoherentMixture
                                                 : StateFamily::PhaseAveragedCoherent;
    for (FamilySpec& f : cfg.families) {
        if (f.family == target)
            return cfg; // already in the requested form
        if (f.family == other) {
            f.family = target;
            f.label = label_for(target);
            return cfg;
        }
    }
    throw ConfigError("the configuration contains neither coherent-mixture nor "
                      "phase-averaged coherent states");
}

FeatureVector regenerate_example(const Provenance& prov, int events_per_vector) {
    if (events_per_vector < 1)
        throw InputError("events_per_vector must be at least 1");
    const SamplerTable table = build_table(prov.spec);
    const QuadratureBatch batch =
        sample(table, static_cast<std::size_t>(events_per_vector), prov.event_seed);
    return featurize(batch);
}

std::string corpus_config_json(const CorpusConfig& cfg) {
    std::string out = "{\"families\":[";
    for (std::size_t i = 0; i < cfg.families.size(); ++i) {
        const FamilySpec& f = cfg.families[i];
        if (i)
            out += ",";
        out += "{\"family\":\"" + std::string(family_name(f.family)) + "\"";
        out += ",\"label\":" + std::to_string(static_cast<int>(f.label));
        out += ",\"alpha\":[" + format17(f.alpha.lo) + "," + format17(f.alpha.hi) + "]";
        out += ",\"nbar\":[" + format17(f.nbar.lo) + "," + format17(f.nbar.hi) + "]";
        out += ",\"n\":[" + std::to_string(f.n_lo) + "," + std::to_string(f.n_hi) + "]";
        out += ",\"xi\":[" + format17(f.xi.lo) + "," + format17(f.xi.hi) + "]}";
    }
    out += "],\"vectors_per_family\":" + std::to_string(cfg.vectors_per_family);
    out += ",\"events_per_vector\":" + std::to_string(cfg.events_per_vector);
    out += ",\"eta\":" + format17(cfg.eta);
    out += ",\"phi\":" + format17(cfg.phi);
    out += ",\"master_seed\":" + std::to_string(cfg.master_seed);
    out += "}";
    return out;
}

CorpusConfig corpus_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("corpus config is not valid JSON: ") + e.what());
    }
    try {
        CorpusConfig cfg;
        cfg.families.clear();
        for (const nlohmann::json& fj : j.at("families"))
            cfg.families.push_back(family_from_json(fj));
        cfg.vectors_per_family = j.at("vectors_per_family").get<int>();
        cfg.events_per_vector = j.at("events_per_vector").get<int>();
        cfg.eta = j.at("eta").get<double>();
        cfg.phi = j.at("phi").get<double>();
        cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
        validate(cfg);
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("corpus config is missing fields: ") + e.what());
    }
}

namespace {

const char* kCorpusMagic = "# quadnc-corpus v1";

std::string corpus_header_row() {
    std::string h = "label,family,alpha,nbar,n,xi,eta,phi,event_seed";
    char buf[8];
    for (int i = 0; i < kNumBins; ++i) {
        std::snprintf(buf, sizeof buf, ",b%03d", i);
        h += buf;
    }
    h += ",kept,dropped";
    return h;
}

} // namespace

void save_corpus(const Corpus& corpus, const CorpusConfig& cfg,
                 const std::string& path, const std::string& args_comment) {
    const std::size_t n = corpus.features.size();
    if (corpus.labels.size() != n || corpus.provenance.size() != n)
        throw InternalError("corpus arrays are misaligned");

    std::string out;
    out.reserve(n * (kNumBins * 20 + 128) + 1024);
    out += kCorpusMagic;
    out += "\n# config: ";
    out += corpus_config_json(cfg);
    out += "\n";
    if (!args_comment.empty()) {
        out += "# args: ";
        out += args_comment;
        out += "\n";
    }
    out += corpus_header_row();
    out += "\n";
    for (std::size_t i = 0; i < n; ++i) {
        const StateSpec& s = corpus.provenance[i].spec;
        out += std::to_string(static_cast<int>(corpus.labels[i]));
        out += ",";
        out += family_name(s.family);
        out += ",";
        out += format17(s.alpha);
        out += ",";
        out += format17(s.nbar);
        out += ",";
        out += std::to_string(s.n);
        out += ",";
        out += format17(s.xi);
        out += ",";
        out += format17(s.eta);
        out += ",";
        out += format17(s.phi);
        out += ",";
        out += std::to_string(corpus.provenance[i].event_seed);
        out += ",";
        out += feature_csv_row(corpus.features[i]);
        out += "\n";
    }
    write_text_file(path, out);
}

LoadedCorpus load_corpus(const std::string& path) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    long line_no = 0;

    if (!std::getline(in, line) || line != kCorpusMagic)
        throw FormatError("'" + path + "' is not a corpus file (bad magic line)");
    ++line_no;

    LoadedCorpus result;
    bool saw_config = false;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const std::string where = path + " line " + std::to_string(line_no);
        if (line.rfind("# config: ", 0) == 0) {
            result.config = corpus_config_from_json(line.substr(10));
            saw_config = true;
            continue;
        }
        if (line[0] == '#')
            continue;
        if (!saw_header) {
            if (line != corpus_header_row())
                throw FormatError(where + ": unexpected column header");
            saw_header = true;
            continue;
        }
        const std::vector<std::string> cells = split_csv(line);
        if (cells.size() != 9 + kNumBins + 2)
            throw FormatError(where + ": expected " + std::to_string(9 + kNumBins + 2) +
                              " columns, got " + std::to_string(cells.size()));
        StateSpec spec;
        const int label = static_cast<int>(parse_u64(cells[0], where));
        if (label != 0 && label != 1)
            throw FormatError(where + ": label must be 0 or 1");
        spec.family = family_from_name(cells[1]);
        spec.alpha = parse_double(cells[2], where);
        spec.nbar = parse_double(cells[3], where);
        spec.n = static_cast<int>(parse_u64(cells[4], where));
        spec.xi = parse_double(cells[5], where);
        spec.eta = parse_double(cells[6], where);
        spec.phi = parse_double(cells[7], where);
        validate(spec);
        const std::uint64_t event_seed = parse_u64(cells[8], where);

        FeatureVector f;
        for (int b = 0; b < kNumBins; ++b)
            f.bins[static_cast<std::size_t>(b)] =
                parse_double(cells[static_cast<std::size_t>(9 + b)], where);
        f.kept = static_cast<std::int64_t>(parse_u64(cells[9 + kNumBins], where));
        f.dropped = static_cast<std::int64_t>(parse_u64(cells[9 + kNumBins + 1], where));

        result.corpus.features.push_back(f);
        result.corpus.labels.push_back(label == 0 ? ClassLabel::Classical
                                                  : ClassLabel::Nonclassical);
        result.corpus.provenance.push_back({spec, event_seed});
    }
    if (!saw_config)
        throw FormatError("'" + path + "' has no config comment");
    if (!saw_header || result.corpus.features.empty())
        throw FormatError("'" + path + "' contains no examples");
    return result;
}

} // namespace quadnc
