package fixtures;

class Shape {
    static class S1 extends Shape {
    }

    static class S2 extends Shape {
    }

    static class S3 extends Shape {
    }

    static class S4 extends Shape {
    }

    static class S5 extends Shape {
    }

    static class S6 extends Shape {
    }

    static class S7 extends Shape {
    }

    static class S8 extends Shape {
    }

    static class S9 extends Shape {
    }

    static class S10 extends Shape {
    }
}
