package fixtures;

class Node {
    private Edge first;

    void attach(Edge edge) {
        first = edge;
    }

    Edge head() {
        return first;
    }

    static class Edge {
        private Node target;

        void point(Node node) {
            target = node;
        }

        Node target() {
            return target;
        }
    }
}
