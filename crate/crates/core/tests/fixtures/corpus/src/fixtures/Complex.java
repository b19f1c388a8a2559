package fixtures;

public class Complex {
    public static void main(String[] args) {
        System.out.println(classify(args.length));
    }

    static String classify(int n) {
        String label = "none";
        if (n == 1) {
            label = "v1";
        }
        if (n == 2) {
            label = "v2";
        }
        if (n == 3) {
            label = "v3";
        }
        if (n == 4) {
            label = "v4";
        }
        if (n == 5) {
            label = "v5";
        }
        if (n == 6) {
            label = "v6";
        }
        if (n == 7) {
            label = "v7";
        }
        if (n == 8) {
            label = "v8";
        }
        if (n == 9) {
            label = "v9";
        }
        if (n == 10) {
            label = "v10";
        }
        if (n == 11) {
            label = "v11";
        }
        if (n == 12) {
            label = "v12";
        }
        if (n == 13) {
            label = "v13";
        }
        if (n == 14) {
            label = "v14";
        }
        if (n == 15) {
            label = "v15";
        }
        if (n == 16) {
            label = "v16";
        }
        if (n == 17) {
            label = "v17";
        }
        if (n == 18) {
            label = "v18";
        }
        if (n == 19) {
            label = "v19";
        }
        return label;
    }

    static void wire() {
        Bird bird = new Bird();
        Bird.Penguin penguin = new Bird.Penguin();
        Point point = new Point();
        Node node = new Node();
        Node.Edge edge = new Node.Edge();
        Marker marker = null;
        Shape shape = new Shape();
        Shape.S1 s1 = new Shape.S1();
        Shape.S2 s2 = new Shape.S2();
        Shape.S3 s3 = new Shape.S3();
        Shape.S4 s4 = new Shape.S4();
        Shape.S5 s5 = new Shape.S5();
        Shape.S6 s6 = new Shape.S6();
        Shape.S7 s7 = new Shape.S7();
        Shape.S8 s8 = new Shape.S8();
        Shape.S9 s9 = new Shape.S9();
        Shape.S10 s10 = new Shape.S10();
        Sorter sorter = new Sorter();
        Multifaceted multifaceted = new Multifaceted();
        Renderer renderer = new Renderer();
    }
}
