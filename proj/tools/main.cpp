#include <iostream>
#include <string>
#include <vector>

#include <boost/program_options.hpp>

#include "config.hpp"
#include "run.hpp"

namespace po = boost::program_options;
using namespace fraclimit::cli;

int main(int argc, char** argv) {
    po::options_description desc("Usage: fraclimit --config run.cfg [--out DIR] [--set k=v ...]\nOptions");
    desc.add_options()("help,h", "show this message")("config,c", po::value<std::string>(), "config file")(
        "out,o", po::value<std::string>(), "output directory (overrides the config key 'out')")(
        "set,s", po::value<std::vector<std::string>>()->composing(), "override a key: section.key=value")(
        "list-keys", "print every config key with its default and exit");
    po::variables_map vm;
    try {
        po::store(po::command_line_parser(argc, argv).options(desc).run(), vm);
        po::notify(vm);
    } catch (const po::error& e) {
        std::cerr << "fraclimit: " << e.what() << "\n" << desc;
        return kConfigError;
    }
    if (vm.count("help")) {
        std::cout << desc;
        return kOk;
    }
    if (vm.count("list-keys")) {
        for (const auto& k : config_schema())
            std::cout << (k.section.empty() ? "" : k.section + ".") << k.key << " = " << k.default_value << "    # "
                      << k.help << "\n";
        return kOk;
    }
    if (!vm.count("config")) {
        std::cerr << "fraclimit: --config is required\n" << desc;
        return kConfigError;
    }
    try {
        ConfigValues raw = ConfigValues::load(vm["config"].as<std::string>());
        if (vm.count("set"))
            for (const auto& s : vm["set"].as<std::vector<std::string>>()) raw.set(s);
        if (vm.count("out")) raw.set("out=" + vm["out"].as<std::string>());
        const RunConfig cfg = make_run_config(raw);
        return run_mode(cfg, std::cout);
    } catch (...) {
        std::string msg;
        const int code = exit_code_for_current_exception(msg);
        std::cerr << "fraclimit: " << msg << "\n";
        return code;
    }
}
