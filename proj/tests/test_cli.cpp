#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "quadnc/io.hpp"
#include "quadnc/nn.hpp"

using namespace quadnc;

namespace {

std::string cli_path() {
    const char* p = std::getenv("QUADNC_CLI_PATH");
    REQUIRE_MESSAGE(p != nullptr, "QUADNC_CLI_PATH must point at the quadnc binary");
    return p;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("quadnc-cli-test-" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run(const TempDir& tmp, const std::string& args,
              const std::string& env_prefix = "") {
    const std::string out_path = tmp.file("stdout.txt");
    const std::string err_path = tmp.file("stderr.txt");
    const std::string cmd = env_prefix + cli_path() + " " + args + " > " + out_path +
                            " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_text_file(out_path);
    r.err = read_text_file(err_path);
    return r;
}

long count_lines(const std::string& text) {
    long n = 0;
    for (char c : text)
        if (c == '\n')
            ++n;
    return n;
}

long count_data_rows(const std::string& csv) {
    long rows = 0;
    std::size_t start = 0;
    bool past_header = false;
    while (start < csv.size()) {
        std::size_t end = csv.find('\n', start);
        if (end == std::string::npos)
            end = csv.size();
        const std::string line = csv.substr(start, end - start);
        if (!line.empty() && line[0] != '#') {
            if (past_header)
                ++rows;
            else
                past_header = true; // first non-comment line is the header
        }
        start = end + 1;
    }
    return rows;
}

} // namespace

TEST_CASE("simulate writes a header plus one line per event, reproducibly") {
    TempDir tmp;
    const std::string out = tmp.file("events.txt");
    const RunResult r = run(
        tmp, "simulate --family spacs --alpha 0.32 --eta 0.6 --count 200 --seed 4 --out " + out);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("wrote") != std::string::npos);

    const std::string text = read_text_file(out);
    CHECK(count_lines(text) == 201);
    CHECK(text.rfind("phi=", 0) == 0);
    CHECK(text.find("family=spacs") != std::string::npos);
    CHECK(text.find("seed=4") != std::string::npos);

    const std::string again = tmp.file("again.txt");
    run(tmp, "simulate --family spacs --alpha 0.32 --eta 0.6 --count 200 --seed 4 --out " + again);
    CHECK(read_text_file(again) == text);
}

TEST_CASE("QUADNC_SEED overrides the --seed flag") {
    TempDir tmp;
    const std::string by_flag = tmp.file("flag.txt");
    const std::string by_env = tmp.file("env.txt");
    run(tmp, "simulate --family thermal --nbar 1 --count 100 --seed 2 --out " + by_flag);
    const RunResult r =
        run(tmp, "simulate --family thermal --nbar 1 --count 100 --seed 1 --out " + by_env,
            "QUADNC_SEED=2 ");
    REQUIRE(r.exit_code == 0);
    CHECK(read_text_file(by_env) == read_text_file(by_flag));
}

TEST_CASE("simulate validates its arguments") {
    TempDir tmp;
    const RunResult zero = run(
        tmp, "simulate --family coherent --count 0 --out " + tmp.file("x.txt"));
    CHECK(zero.exit_code != 0);

    const RunResult bogus = run(
        tmp, "simulate --family bogus --count 10 --out " + tmp.file("x.txt"));
    CHECK(bogus.exit_code != 0);
    CHECK(bogus.err.find("coherent") != std::string::npos); // lists the choices

    const RunResult bad_eta = run(
        tmp, "simulate --family coherent --eta 2 --count 10 --out " + tmp.file("x.txt"));
    CHECK(bad_eta.exit_code != 0);
    CHECK(bad_eta.err.find("error:") != std::string::npos);
}

TEST_CASE("featurize bins an event file, optionally subsampled") {
    TempDir tmp;
    const std::string events = tmp.file("events.txt");
    run(tmp, "simulate --family fock --n 2 --eta 0.6 --count 400 --seed 7 --out " + events);

    const std::string full = tmp.file("full.csv");
    const RunResult r1 = run(tmp, "featurize --in " + events + " --out " + full);
    REQUIRE(r1.exit_code == 0);
    CHECK(r1.out.find("kept=400") != std::string::npos);
    const std::string text = read_text_file(full);
    CHECK(text.rfind("# quadnc-features v1\n", 0) == 0);
    CHECK(text.find("# args: featurize --in ") != std::string::npos);
    CHECK(text.find("b000,") != std::string::npos);
    CHECK(text.find("kept,dropped") != std::string::npos);

    const std::string sub = tmp.file("sub.csv");
    const RunResult r2 = run(
        tmp, "featurize --in " + events + " --out " + sub + " --size 100 --seed 5");
    REQUIRE(r2.exit_code == 0);
    CHECK(r2.out.find("kept=100") != std::string::npos);

    const RunResult missing = run(tmp, "featurize --in " + tmp.file("nope.txt") +
                                           " --out " + tmp.file("y.csv"));
    CHECK(missing.exit_code != 0);
    CHECK(missing.err.find("error:") != std::string::npos);
}

TEST_CASE("train fits a model on a tiny generated corpus") {
    TempDir tmp;
    const std::string model_path = tmp.file("model.json");
    const std::string log_path = tmp.file("train.log");
    const std::string corpus_path = tmp.file("corpus.csv");
    const RunResult r = run(tmp, "train --vectors 20 --events 200 --max-epochs 3"
                                 " --seed 9 --out " + model_path + " --log " + log_path +
                                 " --corpus-out " + corpus_path);
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    CHECK(r.out.find("trained on 120 examples") != std::string::npos);

    const NetworkModel model = load(model_path);
    CHECK(model.layer_dims == std::vector<int>({160, 64, 32, 16, 2}));
    CHECK(model.train_seed == 9);
    CHECK(model.args.find("train --out") != std::string::npos);

    const std::string log = read_text_file(log_path);
    CHECK(log.rfind("# quadnc-train-log v1\n", 0) == 0);
    CHECK(log.find("# config: {") != std::string::npos);
    CHECK(log.find("epoch,train_loss,val_loss,improved\n") != std::string::npos);
    CHECK(log.find("# best epoch: ") != std::string::npos);

    const std::string corpus = read_text_file(corpus_path);
    CHECK(corpus.rfind("# quadnc-corpus v1\n", 0) == 0);
    CHECK(count_data_rows(corpus) == 120);

    // Retraining from the saved corpus gives the same network.
    const std::string model2 = tmp.file("model2.json");
    const RunResult r2 = run(tmp, "train --corpus " + corpus_path + " --seed 9 --max-epochs 3"
                                  " --out " + model2 + " --log " + tmp.file("t2.log"));
    REQUIRE_MESSAGE(r2.exit_code == 0, r2.err);
    const NetworkModel reload = load(model2);
    CHECK(reload.weights == model.weights);
    CHECK(reload.biases == model.biases);
}

TEST_CASE("train excludes generator flags when loading a corpus") {
    TempDir tmp;
    const RunResult r = run(tmp, "train --corpus c.csv --vectors 5 --out " +
                                     tmp.file("m.json"));
    CHECK(r.exit_code != 0); // --vectors excludes --corpus
}

TEST_CASE("ablation and variant flags shape the generated corpus") {
    TempDir tmp;
    const std::string corpus_path = tmp.file("ablated.csv");
    const RunResult r = run(tmp, "train --ablate-spacs --vectors 20 --events 200"
                                 " --max-epochs 1 --seed 3 --out " + tmp.file("m.json") +
                                 " --corpus-out " + corpus_path);
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    const std::string corpus = read_text_file(corpus_path);
    // Match the family cell, not a bare substring: the replayable "# args:"
    // comment legitimately contains "--ablate-spacs".
    CHECK(corpus.find(",spacs,") == std::string::npos);
    CHECK(count_data_rows(corpus) == 100); // five families remain

    const std::string swapped_path = tmp.file("swapped.csv");
    const RunResult r2 = run(tmp, "train --phase-averaged --vectors 20 --events 200"
                                  " --max-epochs 1 --seed 3 --out " + tmp.file("m2.json") +
                                  " --corpus-out " + swapped_path);
    REQUIRE_MESSAGE(r2.exit_code == 0, r2.err);
    const std::string swapped = read_text_file(swapped_path);
    CHECK(swapped.find(",phase-averaged,") != std::string::npos);
    CHECK(swapped.find(",mixture,") == std::string::npos);
}

TEST_CASE("predict scores an event file and never maps verdicts to exit codes") {
    TempDir tmp;
    const std::string model_path = tmp.file("model.json");
    run(tmp, "train --vectors 20 --events 200 --max-epochs 2 --seed 1 --out " + model_path);

    const std::string events = tmp.file("events.txt");
    run(tmp, "simulate --family squeezed --xi 1 --eta 0.6 --count 2000 --seed 6 --out " +
                 events);

    const std::string report = tmp.file("verdict.csv");
    const RunResult r = run(tmp, "predict --model " + model_path + " --events " + events +
                                     " --out " + report);
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    CHECK(r.out.find("r=") != std::string::npos);
    CHECK(r.out.find("variance=") != std::string::npos);
    CHECK(r.out.find("events=2000") != std::string::npos);

    const std::string csv = read_text_file(report);
    CHECK(csv.find("# sweep: predict") != std::string::npos);
    CHECK(count_data_rows(csv) == 1);

    const std::string empty = tmp.file("empty.txt");
    write_text_file(empty, "phi=0 seed=none family=none\n");
    const RunResult bad = run(tmp, "predict --model " + model_path + " --events " + empty);
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("error:") != std::string::npos);
}

TEST_CASE("sweeps write one CSV row per grid point") {
    TempDir tmp;
    const std::string model_path = tmp.file("model.json");
    run(tmp, "train --vectors 20 --events 200 --max-epochs 2 --seed 1 --out " + model_path);

    const std::string families = tmp.file("families.csv");
    const RunResult r = run(tmp, "sweep families --model " + model_path +
                                     " --events 50 --out " + families);
    REQUIRE_MESSAGE(r.exit_code == 0, r.err);
    CHECK(r.out.find("209 rows") != std::string::npos);
    const std::string csv = read_text_file(families);
    CHECK(csv.find("# sweep: families") != std::string::npos);
    CHECK(csv.find("# args: sweep families --model ") != std::string::npos);
    CHECK(count_data_rows(csv) == 209);

    // Identical invocation, identical bytes.
    const std::string again = tmp.file("again.csv");
    run(tmp, "sweep families --model " + model_path + " --events 50 --out " + again);
    const std::string a = read_text_file(families);
    const std::string b = read_text_file(again);
    CHECK(a.substr(a.find("\nfamily,")) == b.substr(b.find("\nfamily,")));

    const std::string cat_csv = tmp.file("cat.csv");
    const RunResult rc = run(tmp, "sweep cat --model " + model_path +
                                      " --events 50 --alphas 0,1 --phis 0.5 --out " + cat_csv);
    REQUIRE_MESSAGE(rc.exit_code == 0, rc.err);
    CHECK(count_data_rows(read_text_file(cat_csv)) == 2);

    const RunResult unknown = run(tmp, "sweep bogus --model " + model_path +
                                           " --out " + tmp.file("x.csv"));
    CHECK(unknown.exit_code != 0);

    const RunResult nbins = run(tmp, "sweep phase-squeezed --nbins 1 --model " + model_path +
                                         " --out " + tmp.file("y.csv"));
    CHECK(nbins.exit_code != 0);
}
