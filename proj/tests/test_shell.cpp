#include "doctest.h"

#include <random>
#include <sstream>

#include "testutil.hpp"
#include "vfs/fscore.hpp"
#include "vfs/security.hpp"
#include "vfs/shell.hpp"

using namespace vfs;
using namespace vfstest;

namespace {

struct ShellRun {
    int exit_code;
    std::string transcript;
};

ShellRun run_script(const std::string& script) {
    std::istringstream in(script);
    std::ostringstream out;
    Shell shell(in, out, true, kTinyBs, kTinyBlocks, kTinyInodes);
    int code = shell.run();
    return {code, out.str()};
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("read_text_until_sentinel") {
    {
        std::istringstream in("abc\nEOF\n");
        CHECK(read_text_until_sentinel(in) == "abc\n");
    }
    {
        std::istringstream in("EOF\n");
        CHECK(read_text_until_sentinel(in).empty());
    }
    {
        // a line with a trailing space is content, not the sentinel
        std::istringstream in("EOF \nEOF\n");
        CHECK(read_text_until_sentinel(in) == "EOF \n");
    }
    {
        // end of input counts as the sentinel
        std::istringstream in("abc\ndef");
        CHECK(read_text_until_sentinel(in) == "abc\ndef\n");
    }
}

TEST_CASE("scripted create, mount and file operations") {
    TempDir tmp;
    std::string disk = tmp.file("mydisk");
    std::string script = "1\n" + disk + "\n" +    // create disk
                         "2\n" + disk + "\n" +    // mount
                         "1\nmain.cpp\n" +        // create file
                         "2\nmain.cpp\n2\n" +     // open in write mode
                         "4\n0\nint main() {}\nEOF\n" + // write
                         "6\n0\n" +               // close
                         "8\n" +                  // list files
                         "10\n" +                 // unmount
                         "9\n";                   // exit

    auto run = run_script(script);
    CHECK(run.exit_code == 0);
    CHECK(contains(run.transcript, "Disk is mounted!!!"));
    CHECK(contains(run.transcript, "File Successfully Created :)"));
    CHECK(contains(run.transcript,
                   "File main.cpp opened with file descriptor : 0"));
    CHECK(contains(run.transcript, "14 bytes written."));
    CHECK(contains(run.transcript, "File Written Successfully."));
    CHECK(contains(run.transcript, "List of All files"));
    CHECK(contains(run.transcript, "main.cpp with inode : 0"));

    // the file menu is the exact 12-line block
    CHECK(contains(run.transcript, "=====\n"
                                   "1 : create file\n"
                                   "2 : open file\n"
                                   "3 : read file\n"
                                   "4 : write file\n"
                                   "5 : append file\n"
                                   "6 : close file\n"
                                   "7 : delete file\n"
                                   "8 : list of files\n"
                                   "9 : list of opened files\n"
                                   "10: unmount\n"
                                   "=====\n"));
}

TEST_CASE("invalid menu input is rejected and the loop continues") {
    TempDir tmp;
    auto run = run_script("banana\n4 x\n9\n");
    CHECK(run.exit_code == 0);
    CHECK(contains(run.transcript, "Error :"));
    // the top menu reappears after each rejection
    std::size_t menus = 0, at = 0;
    while ((at = run.transcript.find("1 : create disk", at)) !=
           std::string::npos) {
        ++menus;
        ++at;
    }
    CHECK(menus == 3u);
}

TEST_CASE("script determinism: identical transcript and image") {
    TempDir tmp;
    auto session = [&](const std::string& disk) {
        std::string script = "1\n" + disk + "\n2\n" + disk + "\n" +
                             "1\na.txt\n2\na.txt\n2\n" +
                             "4\n0\nhello\nEOF\n" + "6\n0\n" +
                             "1\nb.txt\n8\n10\n9\n";
        return run_script(script);
    };
    auto one = session(tmp.file("d1"));
    auto two = session(tmp.file("d2"));
    // transcripts differ only in the echoed disk path
    std::string t1 = one.transcript, t2 = two.transcript;
    for (std::string::size_type p; (p = t1.find("d1")) != std::string::npos;)
        t1.replace(p, 2, "dX");
    for (std::string::size_type p; (p = t2.find("d2")) != std::string::npos;)
        t2.replace(p, 2, "dX");
    CHECK(t1 == t2);
    CHECK(checksum_file(tmp.file("d1")) == checksum_file(tmp.file("d2")));
}

TEST_CASE("mount of an auth-enabled disk prompts for credentials") {
    TempDir tmp;
    std::string disk = tmp.file("d");
    {
        make_tiny_disk(disk);
        Mount m = Mount::mount(disk);
        set_password(m, Credentials{"alice", "pw"});
        m.unmount();
    }
    auto good = run_script("2\n" + disk + "\nalice\npw\n10\n9\n");
    CHECK(contains(good.transcript, "Enter username :"));
    CHECK(contains(good.transcript, "Disk is mounted!!!"));

    auto bad = run_script("2\n" + disk + "\nalice\nwrong\n9\n");
    CHECK(contains(bad.transcript, "Error :"));
    CHECK_FALSE(contains(bad.transcript, "Disk is mounted!!!"));
}

TEST_CASE("random script input never breaks the loop") {
    TempDir tmp;
    // keep stray relative-path disk files inside the scratch dir
    auto old_cwd = std::filesystem::current_path();
    std::filesystem::current_path(tmp.path());
    std::mt19937 rng(31);
    for (int round = 0; round < 30; ++round) {
        std::string script;
        for (int i = 0; i < 40; ++i) {
            int pick = static_cast<int>(rng() % 4);
            if (pick == 0)
                script += std::to_string(rng() % 12);
            else if (pick == 1)
                script += "garbage";
            else if (pick == 2)
                script += tmp.file("z" + std::to_string(rng() % 3));
            else
                for (int j = 0; j < 5; ++j) {
                    char c = static_cast<char>(1 + rng() % 255);
                    script += (c == '/') ? '_' : c;
                }
            script += '\n';
        }
        auto run = run_script(script);
        CHECK(run.exit_code == 0);
    }
    std::filesystem::current_path(old_cwd);
}
