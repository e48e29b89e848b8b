#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "fxc/image.hpp"

namespace fs = std::filesystem;

namespace {

fs::path cli_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("fxc_cli_tests_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    std::string cmd = std::string(FXC_CLI_PATH) + " " + args + " >" +
                      (cli_dir() / "stdout.txt").string() + " 2>" +
                      (cli_dir() / "stderr.txt").string();
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string last_stdout() {
    std::ifstream in(cli_dir() / "stdout.txt");
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

std::string last_stderr() {
    std::ifstream in(cli_dir() / "stderr.txt");
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("edges rejects inverted thresholds with a usage error") {
    CHECK(run("edges --image missing.pgm --out x.pgm --low 10 --high 5") == 2);
}

TEST_CASE("missing input exits 1 and names the path") {
    CHECK(run("edges --image definitely_missing_face.pgm --out " +
              (cli_dir() / "e.pgm").string()) == 1);
    CHECK(last_stderr().find("definitely_missing_face.pgm") != std::string::npos);
}

TEST_CASE("synth rejects per-class 1") {
    CHECK(run("synth --out " + (cli_dir() / "bad").string() + " --per-class 1") == 2);
}

TEST_CASE("train rejects rate 0") {
    CHECK(run("train --manifest m.csv --out m.json --rate 0") == 2);
}

TEST_CASE("grid rejects an empty rate list") {
    CHECK(run("grid --manifest m.csv --out g.csv --rates") == 2);
}

TEST_CASE("unknown subcommand is a usage error") {
    CHECK(run("frobnicate") == 2);
}

TEST_CASE("synth then edges produces a binary edge map") {
    fs::path corpus = cli_dir() / "corpus";
    REQUIRE(run("synth --out " + corpus.string() + " --per-class 2 --seed 3") == 0);
    REQUIRE(fs::exists(corpus / "manifest.csv"));
    int images = 0;
    for (const auto& e : fs::directory_iterator(corpus))
        if (e.path().extension() == ".pgm") ++images;
    CHECK(images == 14);

    fs::path edge_out = cli_dir() / "edges.pgm";
    REQUIRE(run("edges --image " + (corpus / "anger_000.pgm").string() +
                " --out " + edge_out.string()) == 0);
    fxc::GrayImage edges = fxc::load_pgm_file(edge_out.string());
    CHECK(edges.width == 85);
    CHECK(edges.height == 85);
    bool any_edge = false;
    for (auto p : edges.pixels) {
        CHECK((p == 0 || p == 255));
        if (p == 255) any_edge = true;
    }
    CHECK(any_edge);
    CHECK(last_stdout().find("edge pixels") != std::string::npos);
}

TEST_CASE("prep crops and equalizes a face image") {
    fs::path input = cli_dir() / "prep_input.pgm";
    fxc::GrayImage img(120, 120, 150);
    for (int y = 40; y < 60; ++y)
        for (int x = 40; x < 80; ++x) img.at(x, y) = 30;
    fxc::save_pgm_file(img, input.string());

    fs::path out = cli_dir() / "prep_face.pgm";
    REQUIRE(run("prep --image " + input.string() + " --out " + out.string()) == 0);
    fxc::GrayImage face = fxc::load_pgm_file(out.string());
    CHECK(face.width == 85);
    CHECK(face.height == 85);
}

TEST_CASE("prep scans JAFFE-coded file names into a manifest") {
    fs::path scan = cli_dir() / "jaffe_scan";
    fs::create_directories(scan);
    fxc::GrayImage img(85, 85, 120);
    fxc::save_pgm_file(img, (scan / "KA.AN1.39.pgm").string());
    fxc::save_pgm_file(img, (scan / "KM.SU3.11.pgm").string());
    fxc::save_pgm_file(img, (scan / "notes.txt").string());
    fs::path manifest = cli_dir() / "jaffe_manifest.csv";
    REQUIRE(run("prep --scan " + scan.string() + " --out " + manifest.string()) == 0);
    std::ifstream in(manifest);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(text.find("KA.AN1.39.pgm,Anger") != std::string::npos);
    CHECK(text.find("KM.SU3.11.pgm,Surprise") != std::string::npos);
    CHECK(text.find("notes.txt") == std::string::npos);
}

TEST_CASE("prep requires exactly one input mode") {
    CHECK(run("prep --out x.pgm") == 2);
}

TEST_CASE("prep can export the five region patches") {
    fs::path corpus = cli_dir() / "patch_corpus";
    REQUIRE(run("synth --out " + corpus.string() + " --per-class 2 --seed 31") == 0);
    fs::path patches = cli_dir() / "patches";
    REQUIRE(run("prep --image " + (corpus / "happiness_001.pgm").string() +
                " --out " + (cli_dir() / "patch_face.pgm").string() +
                " --patches-dir " + patches.string()) == 0);
    for (const char* name : {"left_eyebrow", "right_eyebrow", "left_eye",
                             "right_eye", "mouth"}) {
        fxc::GrayImage p =
            fxc::load_pgm_file((patches / (std::string(name) + ".pgm")).string());
        CHECK(p.width == (std::string(name) == "mouth" ? 32 : 24));
        CHECK(p.height == (std::string(name) == "mouth" ? 16 : 12));
    }
}

TEST_CASE("tiny train, classify and eval flow") {
    fs::path dir = cli_dir() / "flow";
    fs::create_directories(dir);
    REQUIRE(run("synth --out " + (dir / "corpus").string() +
                " --per-class 7 --seed 19") == 0);
    std::string manifest = (dir / "corpus" / "manifest.csv").string();
    REQUIRE(run("train --manifest " + manifest + " --out " +
                (dir / "model.json").string() + " --history " +
                (dir / "hist.csv").string() +
                " --hidden 5 --max-epochs 30 --per-class-test 1 --seed 4 "
                "--test-manifest-out " + (dir / "test.csv").string()) == 0);
    CHECK(fs::exists(dir / "model.json"));

    std::ifstream hist(dir / "hist.csv");
    std::string line;
    std::getline(hist, line);
    CHECK(line == "epoch,mse");
    int rows = 0;
    while (std::getline(hist, line)) ++rows;
    CHECK(rows == 30);

    REQUIRE(run("classify --model " + (dir / "model.json").string() +
                " --image " + (dir / "corpus" / "anger_000.pgm").string()) == 0);
    std::string out = last_stdout();
    CHECK(out.find("Y1 Anger") != std::string::npos);
    CHECK(out.find("Y7 Neutral") != std::string::npos);

    REQUIRE(run("eval --model " + (dir / "model.json").string() + " --manifest " +
                (dir / "test.csv").string() + " --out " +
                (dir / "eval.csv").string()) == 0);
    CHECK(last_stdout().find("Average") != std::string::npos);
    CHECK(fs::exists(dir / "eval.csv"));
}

TEST_CASE("corrupt model file exits 1") {
    fs::path bad_model = cli_dir() / "bad_model.json";
    std::ofstream(bad_model) << "{ not json";
    fs::path corpus = cli_dir() / "corpus";
    CHECK(run("classify --model " + bad_model.string() + " --image " +
              (corpus / "anger_000.pgm").string()) == 1);
}

TEST_CASE("failed runs leave no partial artifact behind") {
    fs::path out = cli_dir() / "never_written.pgm";
    CHECK(run("edges --image missing_input.pgm --out " + out.string()) == 1);
    CHECK_FALSE(fs::exists(out));
    CHECK_FALSE(fs::exists(out.string() + ".tmp"));
}

} // TEST_SUITE
