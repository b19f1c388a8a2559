package fixtures;

class Bird {
    void fly() {
        System.out.println("flying");
    }

    static class Penguin extends Bird {
        @Override
        void fly() {
            throw new UnsupportedOperationException("penguins do not fly");
        }
    }
}
