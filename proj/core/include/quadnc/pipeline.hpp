#ifndef QUADNC_PIPELINE_HPP
#define QUADNC_PIPELINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "quadnc/features.hpp"
#include "quadnc/states.hpp"

namespace quadnc {

struct ParamRange {
    double lo = 0.0;
    double hi = 0.0;
};

// One training family: which state, its label, and the parameter ranges the
// generator draws from. Only the fields the family uses are consulted.
struct FamilySpec {
    StateFamily family = StateFamily::Coherent;
    ClassLabel label = ClassLabel::Classical;
    ParamRange alpha;
    ParamRange nbar;
    int n_lo = 0;
    int n_hi = 0;
    ParamRange xi;
};

struct CorpusConfig {
    std::vector<FamilySpec> families;
    int vectors_per_family = 20000;
    int events_per_vector = 16000;
    double eta = 0.6;
    double phi = 0.0;
    std::uint64_t master_seed = 0;
    int jobs = 1;
};

// Everything needed to rebuild one example bit-for-bit.
struct Provenance {
    StateSpec spec;
    std::uint64_t event_seed = 0;
};

struct Corpus {
    std::vector<FeatureVector> features;
    std::vector<ClassLabel> labels;
    std::vector<Provenance> provenance;
};

// Six families: coherent, thermal and coherent mixtures as classical;
// Fock, squeezed-coherent and SPACS as nonclassical.
CorpusConfig default_training_config();

void validate(const CorpusConfig& config);

Corpus generate_corpus(const CorpusConfig& config);

// Default config minus one family (by tag). Refuses to drop the last family
// of either label.
CorpusConfig ablated_config(const std::string& exclude_tag);
CorpusConfig ablated_config(CorpusConfig base, const std::string& exclude_tag);

// Replaces the coherent-mixture family by the phase-averaged coherent state
// (or back), keeping the alpha range.
CorpusConfig swap_classical_variant(CorpusConfig config, bool use_phase_averaged);

// Rebuilds the histogram for one example from its provenance.
FeatureVector regenerate_example(const Provenance& prov, int events_per_vector);

// Corpus file: `# quadnc-corpus v1`, config as a JSON comment, optional
// `# args:` comment, a column header, then one CSV row per example.
void save_corpus(const Corpus& corpus, const CorpusConfig& config,
                 const std::string& path, const std::string& args_comment = "");

struct LoadedCorpus {
    Corpus corpus;
    CorpusConfig config;
};
LoadedCorpus load_corpus(const std::string& path);

std::string corpus_config_json(const CorpusConfig& config);
CorpusConfig corpus_config_from_json(const std::string& text);

} // namespace quadnc

#endif
