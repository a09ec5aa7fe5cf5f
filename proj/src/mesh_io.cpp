#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mrmom/mesh.hpp"

namespace mrmom {

namespace {

std::string lowercase_ext(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  for (char& c : ext) c = static_cast<char>(std::tolower(c));
  return ext;
}

TriMesh load_msh(std::istream& in, const std::string& path) {
  TriMesh mesh;
  std::string line;
  std::map<int, int> vertex_of_node;  // gmsh node tag -> dense index
  bool saw_nodes = false, saw_elements = false;
  while (std::getline(in, line)) {
    if (line.rfind("$MeshFormat", 0) == 0) {
      std::getline(in, line);
      std::istringstream fmt(line);
      double version = 0;
      int file_type = 0;
      fmt >> version >> file_type;
      if (version < 2.0 || version >= 3.0 || file_type != 0)
        throw std::runtime_error(path + ": expected ASCII Gmsh v2.2 format");
    } else if (line.rfind("$Nodes", 0) == 0) {
      saw_nodes = true;
      std::getline(in, line);
      const int count = std::stoi(line);
      mesh.vertices.reserve(count);
      for (int i = 0; i < count; ++i) {
        std::getline(in, line);
        std::istringstream ls(line);
        int tag;
        double x, y, z;
        if (!(ls >> tag >> x >> y >> z))
          throw std::runtime_error(path + ": malformed node line");
        vertex_of_node[tag] = static_cast<int>(mesh.vertices.size());
        mesh.vertices.emplace_back(x, y, z);
      }
    } else if (line.rfind("$Elements", 0) == 0) {
      saw_elements = true;
      std::getline(in, line);
      const int count = std::stoi(line);
      for (int i = 0; i < count; ++i) {
        std::getline(in, line);
        std::istringstream ls(line);
        int tag, type, ntags;
        ls >> tag >> type >> ntags;
        std::vector<int> tags(ntags);
        for (int& t : tags) ls >> t;
        if (type != 2) continue;  // keep triangles, skip points/lines/etc.
        std::array<int, 3> tri;
        for (int& v : tri) {
          int node;
          if (!(ls >> node)) throw std::runtime_error(path + ": short element");
          auto it = vertex_of_node.find(node);
          if (it == vertex_of_node.end())
            throw std::runtime_error(path + ": element references unknown node");
          v = it->second;
        }
        mesh.triangles.push_back(tri);
        mesh.labels.push_back(ntags > 0 ? tags[0] : 0);
      }
    }
  }
  if (!saw_nodes || !saw_elements)
    throw std::runtime_error(path + ": missing $Nodes or $Elements section");
  return mesh;
}

TriMesh load_off(std::istream& in, const std::string& path) {
  std::string token;
  if (!(in >> token) || token != "OFF")
    throw std::runtime_error(path + ": missing OFF header");
  int nv = 0, nf = 0, ne = 0;
  if (!(in >> nv >> nf >> ne))
    throw std::runtime_error(path + ": malformed OFF counts");
  TriMesh mesh;
  mesh.vertices.resize(nv);
  for (auto& v : mesh.vertices)
    if (!(in >> v.x() >> v.y() >> v.z()))
      throw std::runtime_error(path + ": short vertex list");
  for (int f = 0; f < nf; ++f) {
    int arity;
    if (!(in >> arity)) throw std::runtime_error(path + ": short face list");
    if (arity != 3)
      throw std::runtime_error(path + ": only triangle faces are supported");
    std::array<int, 3> tri;
    for (int& v : tri)
      if (!(in >> v)) throw std::runtime_error(path + ": short face line");
    mesh.triangles.push_back(tri);
  }
  return mesh;
}

}  // namespace

TriMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  const std::string ext = lowercase_ext(path);
  TriMesh mesh;
  if (ext == "msh") {
    mesh = load_msh(in, path);
  } else if (ext == "off") {
    mesh = load_off(in, path);
  } else {
    // sniff: OFF files start with the literal token
    std::string head;
    in >> head;
    in.seekg(0);
    mesh = (head == "OFF") ? load_off(in, path) : load_msh(in, path);
  }
  validate_mesh(mesh);
  repair_orientation(mesh);
  return mesh;
}

void save_mesh(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.precision(17);
  const std::string ext = lowercase_ext(path);
  if (ext == "off") {
    out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_triangles()
        << " 0\n";
    for (const auto& v : mesh.vertices)
      out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    for (const auto& t : mesh.triangles)
      out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    return;
  }
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$Nodes\n" << mesh.num_vertices() << '\n';
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    const auto& v = mesh.vertices[i];
    out << (i + 1) << ' ' << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  }
  out << "$EndNodes\n$Elements\n" << mesh.num_triangles() << '\n';
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const int label = mesh.labels.empty() ? 0 : mesh.labels[t];
    const auto& tri = mesh.triangles[t];
    out << (t + 1) << " 2 2 " << label << ' ' << label << ' ' << (tri[0] + 1)
        << ' ' << (tri[1] + 1) << ' ' << (tri[2] + 1) << '\n';
  }
  out << "$EndElements\n";
}

}  // namespace mrmom
